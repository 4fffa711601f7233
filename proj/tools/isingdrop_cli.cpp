// Command line front end: simulate, particles, limit-shape, compare, sweep, render.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "isingdrop/dynamics.hpp"
#include "isingdrop/harness.hpp"
#include "isingdrop/limits.hpp"
#include "isingdrop/particles.hpp"

using namespace isingdrop;
using harness::ExperimentConfig;
using harness::format_real;

namespace {

double parse_field(const std::string& s) {
    if (s == "inf" || s == "infinity") return lattice::kInfinity;
    return std::stod(s);
}

std::string read_text(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

struct ConfigFlags {
    std::string config_path;
    std::vector<std::uint64_t> seeds;
    std::vector<int> sizes;
    std::vector<double> times;
    std::string h;
    std::string shape;
    double radius = 0.0;
    std::string engine;
    std::string out;
    unsigned workers = 0;

    void attach(CLI::App* app) {
        app->add_option("-c,--config", config_path, "Experiment config (JSON)");
        app->add_option("--seed", seeds, "Seeds; override the config's list");
        app->add_option("--L", sizes, "System sizes; override the config's list");
        app->add_option("--times", times, "Rescaled sample times");
        app->add_option("--field", h, "Field h (number or inf)");
        app->add_option("--shape", shape, "square | disk")->check(CLI::IsMember({"square", "disk"}));
        app->add_option("--radius", radius, "Disk radius");
        app->add_option("--engine", engine, "kmc | graphical")->check(CLI::IsMember({"kmc", "graphical"}));
        app->add_option("-o,--out", out, "Output directory");
        app->add_option("--workers", workers, "Worker threads (0 = all cores)");
    }

    ExperimentConfig build() const {
        nlohmann::json j = config_path.empty() ? nlohmann::json{{"schema_version", harness::kSchemaVersion}}
                                               : nlohmann::json::parse(read_text(config_path));
        if (!seeds.empty()) j["seeds"] = seeds;
        if (!sizes.empty()) j["sizes"] = sizes;
        if (!times.empty()) j["sample_times"] = times;
        if (!h.empty()) j["h"] = h == "inf" ? nlohmann::json("inf") : nlohmann::json(std::stod(h));
        if (!shape.empty()) j["shape"] = {{"kind", shape}};
        if (radius > 0.0) j["shape"]["radius"] = radius;
        if (!engine.empty()) j["engine"] = engine;
        if (!out.empty()) j["output_dir"] = out;
        if (workers) j["workers"] = workers;
        return ExperimentConfig::from_json(j);
    }
};

void print_summary(const harness::ExperimentResult& r) {
    std::printf("%-8s %-12s %-12s %-9s", "L", "tau_mean", "tau_se", "censored");
    for (double t : r.config.sample_times) std::printf(" d(t=%s)", format_real(t).c_str());
    std::printf("\n");
    for (const auto& a : r.sizes) {
        std::printf("%-8d %-12s %-12s %-9zu", a.L, format_real(a.tau_plus.mean).c_str(),
                    format_real(a.tau_plus.standard_error).c_str(), a.censored);
        for (const auto& s : a.hausdorff) std::printf(" %s", format_real(s.mean).c_str());
        std::printf("\n");
    }
    if (r.tau_limit) std::printf("tau limit (rescaled): %s\n", format_real(*r.tau_limit).c_str());
}

void write_snapshots(const ExperimentConfig& cfg, const std::string& dir) {
    const int L = cfg.sizes.front();
    const double scale = harness::time_scale(cfg.h, L);
    std::vector<double> natural;
    for (double t : cfg.sample_times) natural.push_back(t * scale);
    const auto start = lattice::init_from_shape(cfg.shape.build(), L, lattice::BoundaryRule::all_plus);
    const lattice::FieldParameter params{cfg.h, cfg.beta};
    const auto tr = cfg.engine == harness::Engine::kmc
                        ? dynamics::run_kmc(start, params, cfg.horizon * scale, cfg.seeds.front(), natural)
                        : dynamics::run_graphical(start, dynamics::ClockField(cfg.seeds.front(), cfg.h), params,
                                                  cfg.horizon * scale, natural);
    for (std::size_t k = 0; k < cfg.sample_times.size(); ++k) {
        std::ostringstream os;
        if (k < tr.snapshots.size())
            lattice::write_rle_json(os, tr.snapshots[k]);
        else
            lattice::write_rle_json(os, lattice::SpinConfiguration(L, lattice::BoundaryRule::all_plus));
        harness::write_file_atomic(std::filesystem::path(dir) / ("snapshot_t" + format_real(cfg.sample_times[k]) + ".json"),
                                   os.str());
    }
}

geometry::PlanarShape read_polygon(const std::string& path) {
    std::istringstream is(read_text(path));
    return geometry::read_polygon_csv(is);
}

geometry::PlanarShape read_droplet(const std::string& path, int L) {
    std::istringstream is(read_text(path));
    const auto config = lattice::read_rle_json(is);
    return lattice::droplet_shape(config).scaled(1.0 / (L > 0 ? L : config.half_width()));
}

geometry::PlanarShape limit_for(const std::string& kind, double t, double h, double radius, double delta,
                                std::size_t angles) {
    if (kind == "square") return limits::square_limit_shape(t, angles);
    if (kind == "clipped") return limits::clipped_shape(t, delta, angles).shape;
    ExperimentConfig cfg;
    cfg.sizes = {1};
    cfg.seeds = {0};
    cfg.h = h;
    if (radius > 0.0) {
        cfg.shape.kind = harness::ShapeSpec::Kind::disk;
        cfg.shape.radius = radius;
    }
    cfg.target = kind == "drift" ? harness::Target::drift : harness::Target::flow;
    if (kind == "flow") cfg.h = 0.0;
    if (kind == "drift" && !(cfg.h > 0.0)) cfg.h = lattice::kInfinity;
    cfg.validate();
    return harness::limit_shape(cfg, t);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zero-temperature Ising droplet lab"};
    app.require_subcommand(1);

    // simulate
    ConfigFlags sim_flags;
    std::string snapshot_dir;
    auto* sim = app.add_subcommand("simulate", "Run droplet replicas and write results.json / replicas.csv");
    sim_flags.attach(sim);
    sim->add_option("--snapshots", snapshot_dir, "Also write RLE snapshots of the first (L, seed) here");

    // sweep
    ConfigFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "Convergence sweep over L");
    sweep_flags.attach(sweep);

    // particles
    std::string model = "exclusion";
    std::int64_t half_length = 200;
    std::string particle_h = "inf";
    std::uint64_t particle_seed = 1;
    std::vector<double> particle_times{0.25, 0.5, 1.0};
    std::string particle_out;
    auto* parts = app.add_subcommand("particles", "Exclusion or zero-range views; writes x,t,height CSV");
    parts->add_option("--model", model, "exclusion | zero-range")->check(CLI::IsMember({"exclusion", "zero-range"}));
    parts->add_option("--half-length", half_length, "Segment half length (lattice units)");
    parts->add_option("--field", particle_h, "Field h (exclusion only)");
    parts->add_option("--seed", particle_seed, "Clock seed");
    parts->add_option("--times", particle_times, "Rescaled times (units of the half length)");
    parts->add_option("-o,--out", particle_out, "CSV path (stdout if omitted)");

    // limit-shape
    std::string ls_kind = "square";
    double ls_t = 1.0, ls_delta = 0.05, ls_radius = 0.0;
    std::string ls_h = "inf";
    std::size_t ls_angles = 4096;
    std::string ls_out, ls_svg;
    auto* lim = app.add_subcommand("limit-shape", "Evaluate a limit shape as a polygon");
    lim->add_option("--kind", ls_kind, "square | drift | flow | clipped")
        ->check(CLI::IsMember({"square", "drift", "flow", "clipped"}));
    lim->add_option("--t", ls_t, "Rescaled time");
    lim->add_option("--delta", ls_delta, "Clipping width (clipped)");
    lim->add_option("--radius", ls_radius, "Start from a disk of this radius (drift, flow)");
    lim->add_option("--field", ls_h, "Field (drift)");
    lim->add_option("--angles", ls_angles, "Samples per arc / angles");
    lim->add_option("-o,--out", ls_out, "Polygon CSV path (stdout if omitted)");
    lim->add_option("--svg", ls_svg, "Also render to this SVG");

    // compare
    std::string cmp_droplet, cmp_kind = "square";
    int cmp_L = 0;
    double cmp_t = 1.0, cmp_radius = 0.0;
    std::string cmp_h = "inf";
    auto* cmp = app.add_subcommand("compare", "Hausdorff distance between a droplet snapshot and a limit shape");
    cmp->add_option("--droplet", cmp_droplet, "RLE snapshot JSON")->required();
    cmp->add_option("--L", cmp_L, "Scale (defaults to the snapshot half width)");
    cmp->add_option("--t", cmp_t, "Rescaled time of the snapshot");
    cmp->add_option("--kind", cmp_kind, "square | drift | flow")->check(CLI::IsMember({"square", "drift", "flow"}));
    cmp->add_option("--radius", cmp_radius, "Initial disk radius (drift, flow)");
    cmp->add_option("--field", cmp_h, "Field (drift)");

    // render
    std::string rd_droplet, rd_polygon, rd_kind, rd_out = "snapshot.svg";
    int rd_L = 0;
    double rd_t = 0.0, rd_delta = 0.0;
    auto* rd = app.add_subcommand("render", "Render a droplet or polygon, optionally over a limit shape, as SVG");
    rd->add_option("--droplet", rd_droplet, "RLE snapshot JSON");
    rd->add_option("--polygon", rd_polygon, "Polygon CSV (rescaled coordinates)");
    rd->add_option("--L", rd_L, "Scale for --droplet");
    rd->add_option("--overlay", rd_kind, "Limit shape to draw: square | flow")->check(CLI::IsMember({"square", "flow"}));
    rd->add_option("--t", rd_t, "Time of the overlay");
    rd->add_option("--delta", rd_delta, "Half width of the band around the overlay");
    rd->add_option("-o,--out", rd_out, "SVG path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            const ExperimentConfig cfg = sim_flags.build();
            const auto result = harness::run_experiment(cfg);
            const std::string dir = cfg.output_dir.empty() ? "." : cfg.output_dir;
            harness::write_outputs(result, dir);
            if (!snapshot_dir.empty()) write_snapshots(cfg, snapshot_dir);
            print_summary(result);
        } else if (sweep->parsed()) {
            const ExperimentConfig cfg = sweep_flags.build();
            const auto result = harness::run_experiment(cfg);
            const auto table = harness::sweep_table(result);
            if (table.rows.size() < 2) throw std::invalid_argument("a convergence sweep needs at least two sizes");
            harness::write_outputs(result, cfg.output_dir.empty() ? "." : cfg.output_dir, &table);
            std::printf("%-8s %-14s %-14s %-14s %-14s\n", "L", "hausdorff", "se", "tau_error", "se");
            for (const auto& row : table.rows)
                std::printf("%-8d %-14s %-14s %-14s %-14s\n", row.L, format_real(row.hausdorff_error).c_str(),
                            format_real(row.hausdorff_se).c_str(), format_real(row.tau_error).c_str(),
                            format_real(row.tau_se).c_str());
            std::printf("hausdorff non-increasing: %s\ntau error non-increasing: %s\n",
                        table.has_hausdorff ? (table.hausdorff_non_increasing ? "yes" : "no") : "n/a",
                        table.has_tau ? (table.tau_non_increasing ? "yes" : "no") : "n/a");
        } else if (parts->parsed()) {
            std::ostringstream os;
            std::vector<double> natural;
            for (double t : particle_times) natural.push_back(t * double(half_length));
            const double horizon = natural.empty() ? 0.0 : *std::max_element(natural.begin(), natural.end());
            if (model == "exclusion") {
                const lattice::FieldParameter params{parse_field(particle_h)};
                const auto occ = particles::step_occupation(half_length);
                const auto tr = particles::simulate_exclusion(occ, params, dynamics::ClockField(particle_seed, params.h),
                                                              horizon, natural);
                os << "x,t,height,rost_profile\n";
                const double speed = std::isinf(params.h) ? 1.0 : std::tanh(params.h);
                for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
                    const auto eta = particles::height_from_occupation(tr.snapshots[k]);
                    for (std::size_t j = 0; j < eta.values.size(); ++j) {
                        const double x = double(eta.first + std::int64_t(j)) / double(half_length);
                        os << format_real(x) << ',' << format_real(particle_times[k]) << ','
                           << format_real(double(eta.values[j]) / double(half_length)) << ','
                           << format_real(limits::rost_profile_g(x, speed * particle_times[k])) << '\n';
                    }
                }
                std::fprintf(stderr, "right jumps %llu, left jumps %llu, boundary events %llu\n",
                             (unsigned long long)tr.right_jumps, (unsigned long long)tr.left_jumps,
                             (unsigned long long)tr.boundary_events);
            } else {
                // Parabolic cap of height about half_length / 4.
                particles::StepProfile cap{-half_length, {}};
                for (std::int64_t x = -half_length; x <= half_length; ++x) {
                    const double u = double(x) / double(half_length);
                    cap.levels.push_back(std::llround(double(half_length) * (1.0 - u * u) / 4.0));
                }
                const auto z = particles::zrp_from_height(cap);
                const auto tr = particles::simulate_zero_range(z, dynamics::ClockField(particle_seed, 0.0), horizon, natural);
                os << "x,t,height\n";
                for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
                    const auto levels = particles::height_from_zrp(tr.snapshots[k], 0);
                    for (std::size_t j = 0; j < levels.levels.size(); ++j)
                        os << format_real(double(levels.first + std::int64_t(j)) / double(half_length)) << ','
                           << format_real(particle_times[k]) << ','
                           << format_real(double(levels.levels[j]) / double(half_length)) << '\n';
                }
                std::fprintf(stderr, "jumps %llu, annihilations %llu, blocked %llu\n",
                             (unsigned long long)tr.jumps, (unsigned long long)tr.annihilations,
                             (unsigned long long)tr.blocked);
            }
            if (particle_out.empty())
                std::cout << os.str();
            else
                harness::write_file_atomic(particle_out, os.str());
        } else if (lim->parsed()) {
            const auto shape = limit_for(ls_kind, ls_t, parse_field(ls_h), ls_radius, ls_delta, ls_angles);
            std::ostringstream os;
            geometry::write_polygon_csv(os, shape);
            if (ls_out.empty())
                std::cout << os.str();
            else
                harness::write_file_atomic(ls_out, os.str());
            if (!ls_svg.empty()) harness::write_file_atomic(ls_svg, harness::render_snapshot({harness::Layer{shape}}));
            std::fprintf(stderr, "area %s\n", format_real(geometry::area_of(shape)).c_str());
        } else if (cmp->parsed()) {
            const auto droplet = read_droplet(cmp_droplet, cmp_L);
            const auto target = limit_for(cmp_kind, cmp_t, parse_field(cmp_h), cmp_radius, 0.0, 4096);
            double d = 0.0;
            if (droplet.empty() != target.empty())
                d = std::nan("");
            else if (!droplet.empty())
                d = geometry::hausdorff_distance(droplet, target);
            nlohmann::json out = {{"hausdorff", format_real(d)},
                                  {"droplet_area", format_real(geometry::area_of(droplet))},
                                  {"limit_area", format_real(geometry::area_of(target))}};
            std::cout << out.dump(2) << '\n';
        } else if (rd->parsed()) {
            geometry::PlanarShape shape;
            if (!rd_droplet.empty())
                shape = read_droplet(rd_droplet, rd_L);
            else if (!rd_polygon.empty())
                shape = read_polygon(rd_polygon);
            std::vector<harness::Layer> layers;
            if (!rd_kind.empty())
                layers = harness::overlay_layers(shape, limit_for(rd_kind, rd_t, lattice::kInfinity, 0.0, 0.0, 1024),
                                                 rd_delta);
            else
                layers.push_back({shape, "#000000", "#636363", 0.5});
            harness::write_file_atomic(rd_out, harness::render_snapshot(layers));
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
