#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "isingdrop/geometry.hpp"
#include "isingdrop/lattice.hpp"

namespace isingdrop::harness {

using geometry::PlanarShape;

inline constexpr int kSchemaVersion = 1;

/// Initial droplet in rescaled coordinates, inside [-1, 1]^2.
struct ShapeSpec {
    enum class Kind { square, rectangle, disk, polygon };
    Kind kind = Kind::square;
    double radius = 1.0;                       // disk
    std::array<double, 4> box{-1, -1, 1, 1};  // rectangle: x0, y0, x1, y1
    std::vector<geometry::Point> vertices;     // polygon

    PlanarShape build() const;
    bool operator==(const ShapeSpec&) const = default;
};

enum class Engine { kmc, graphical };

enum class Target {
    automatic,  // explicit square shape at h = inf, drift flow for h > 0, curve shortening at h = 0
    square,     // explicit square limit shape
    drift,      // weak solution of the drift flow
    flow,       // anisotropic curve shortening
    none,
};

struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    ShapeSpec shape;
    std::vector<int> sizes;
    double h = lattice::kInfinity;
    double beta = lattice::kInfinity;
    std::vector<std::uint64_t> seeds;
    /// Rescaled: natural time = t * time_scale(h, L).
    std::vector<double> sample_times;
    Engine engine = Engine::kmc;
    Target target = Target::automatic;
    /// Rescaled horizon; extinction not reached by then is censored.
    double horizon = 16.0;
    std::string output_dir;
    /// 0 uses the hardware concurrency.
    unsigned workers = 0;

    /// Throws std::invalid_argument on an unusable config.
    void validate() const;
    nlohmann::json to_json() const;
    /// Rejects unknown schema versions and unknown keys.
    static ExperimentConfig from_json(const nlohmann::json& j);
};

/// L coth(h) for h > 0 (L at h = inf), L^2 at h = 0.
double time_scale(double h, int L);

/// Limit-shape target actually used for a config (resolves `automatic`).
Target resolved_target(const ExperimentConfig& cfg);
/// Limit shape at rescaled time t (empty once extinct).
PlanarShape limit_shape(const ExperimentConfig& cfg, double t);
/// Limiting rescaled extinction time, if known for this config.
std::optional<double> limit_extinction_time(const ExperimentConfig& cfg);

struct ReplicaRecord {
    int L = 0;
    std::uint64_t seed = 0;
    Engine engine = Engine::kmc;
    /// One entry per sample time; NaN when exactly one of the two shapes is empty.
    std::vector<double> hausdorff;
    /// Rescaled extinction time (the horizon if censored).
    double tau_plus = 0.0;
    bool censored = false;
    std::uint64_t overflow_events = 0;
    std::uint64_t event_count = 0;
    double wall_seconds = 0.0;
};

struct Summary {
    double mean = 0.0;
    double standard_error = 0.0;
    double q10 = 0.0;
    double median = 0.0;
    double q90 = 0.0;
    std::size_t count = 0;
};

Summary summarize(std::vector<double> xs);

struct SizeAggregate {
    int L = 0;
    /// Per sample time, over replicas with a defined distance.
    std::vector<Summary> hausdorff;
    Summary tau_plus;
    std::size_t censored = 0;
    std::size_t undefined_distances = 0;
    std::uint64_t overflow_events = 0;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<ReplicaRecord> replicas;  // ordered by (L, seed)
    std::vector<SizeAggregate> sizes;
    std::optional<double> tau_limit;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct SweepRow {
    int L = 0;
    double hausdorff_error = 0.0;  // mean over replicas of the worst sampled time
    double hausdorff_se = 0.0;
    double tau_error = 0.0;        // mean |tau_plus - limit|
    double tau_se = 0.0;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    /// Each error at most the previous one plus their combined standard error.
    bool hausdorff_non_increasing = true;
    bool tau_non_increasing = true;
    bool has_hausdorff = false;
    bool has_tau = false;
};

/// Requires at least two sizes.
SweepTable convergence_sweep(const ExperimentConfig& cfg);
SweepTable sweep_table(const ExperimentResult& result);

// Persistence. Every file is written to a temporary name and renamed.
nlohmann::json result_json(const ExperimentResult& r, const SweepTable* sweep = nullptr);
std::string replicas_csv(const ExperimentResult& r);
/// Wall-clock times live apart from the reproducible outputs.
std::string timings_csv(const ExperimentResult& r);
void write_outputs(const ExperimentResult& r, const std::filesystem::path& dir,
                   const SweepTable* sweep = nullptr);
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
/// Fixed "%.10g"; "nan" and "inf" spelled out.
std::string format_real(double x);

struct Layer {
    PlanarShape shape;
    std::string stroke = "#000000";
    std::string fill = "none";
    double fill_opacity = 1.0;
};

struct RenderStyle {
    int pixels = 600;
    double stroke_width = 1.5;
    std::string empty_label = "empty";
};

/// Deterministic SVG of the layers over the fixed window [-1.2, 1.2]^2.
/// Collinear vertices are dropped; a layer with holes is drawn as one
/// even-odd path. With no nonempty layer the canvas carries the empty label.
std::string render_snapshot(const std::vector<Layer>& layers, const RenderStyle& style = {});
/// Band between the inner and outer delta-neighborhoods, the limit shape, then the droplet.
std::vector<Layer> overlay_layers(const PlanarShape& droplet, const PlanarShape& limit, double delta);

}  // namespace isingdrop::harness
