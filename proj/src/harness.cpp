#include "isingdrop/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "isingdrop/dynamics.hpp"
#include "isingdrop/limits.hpp"
#include "isingdrop/stats.hpp"

namespace isingdrop::harness {

namespace {

using nlohmann::json;

// Angles used for support-function targets.
constexpr std::size_t kDriftAngles = 4096;
constexpr std::size_t kFlowAngles = 256;
// Curve shortening cannot start from a polygon (zero radius of curvature
// between the kinks), so such shapes are first rounded by this much.
constexpr double kFlowRounding = 0.01;

const char* kind_name(ShapeSpec::Kind k) {
    switch (k) {
        case ShapeSpec::Kind::square: return "square";
        case ShapeSpec::Kind::rectangle: return "rectangle";
        case ShapeSpec::Kind::disk: return "disk";
        case ShapeSpec::Kind::polygon: return "polygon";
    }
    return "?";
}

const char* engine_name(Engine e) { return e == Engine::kmc ? "kmc" : "graphical"; }

const char* target_name(Target t) {
    switch (t) {
        case Target::automatic: return "auto";
        case Target::square: return "square";
        case Target::drift: return "drift";
        case Target::flow: return "flow";
        case Target::none: return "none";
    }
    return "?";
}

template <class E>
E parse_enum(const std::string& s, std::initializer_list<std::pair<const char*, E>> table, const char* what) {
    for (const auto& [name, value] : table)
        if (s == name) return value;
    throw std::invalid_argument(std::string("unknown ") + what + ": " + s);
}

json real_to_json(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double real_from_json(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return lattice::kInfinity;
        throw std::invalid_argument("expected a number or \"inf\", got " + s);
    }
    return j.get<double>();
}

json summary_json(const Summary& s) {
    return {{"mean", real_to_json(s.mean)},
            {"standard_error", real_to_json(s.standard_error)},
            {"q10", real_to_json(s.q10)},
            {"median", real_to_json(s.median)},
            {"q90", real_to_json(s.q90)},
            {"count", s.count}};
}

bool is_axis_square(const ShapeSpec& s) {
    if (s.kind == ShapeSpec::Kind::square) return true;
    return s.kind == ShapeSpec::Kind::rectangle && s.box == std::array<double, 4>{-1, -1, 1, 1};
}

geometry::SupportFunction initial_support(const ExperimentConfig& cfg, std::size_t n) {
    if (is_axis_square(cfg.shape)) return limits::square_support(n);
    if (cfg.shape.kind == ShapeSpec::Kind::disk) return limits::disk_support(n, cfg.shape.radius);
    return geometry::support_function_of(cfg.shape.build(), n).function;
}

geometry::SupportFunction flow_start(const ExperimentConfig& cfg) {
    geometry::SupportFunction h = initial_support(cfg, kFlowAngles);
    double mean_rho = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) mean_rho += h.radius_of_curvature(i) / double(h.size());
    if (h.min_radius_of_curvature() < 0.05 * mean_rho)
        for (std::size_t i = 0; i < h.size(); ++i) h[i] += kFlowRounding;
    return h;
}

double hausdorff_or_nan(const PlanarShape& droplet, const PlanarShape& target) {
    if (droplet.empty() && target.empty()) return 0.0;
    if (droplet.empty() || target.empty()) return std::nan("");
    return geometry::hausdorff_distance(droplet, target);
}

ReplicaRecord run_replica(const ExperimentConfig& cfg, const PlanarShape& shape, int L, std::uint64_t seed,
                          const std::vector<PlanarShape>& targets, bool with_targets) {
    const auto start = std::chrono::steady_clock::now();
    const double scale = time_scale(cfg.h, L);
    const lattice::FieldParameter params{cfg.h, cfg.beta};
    const auto config = lattice::init_from_shape(shape, L, lattice::BoundaryRule::all_plus);

    std::vector<double> natural(cfg.sample_times.size());
    for (std::size_t k = 0; k < natural.size(); ++k) natural[k] = cfg.sample_times[k] * scale;
    const double horizon = cfg.horizon * scale;

    dynamics::Trajectory tr;
    if (cfg.engine == Engine::kmc) {
        tr = dynamics::run_kmc(config, params, horizon, seed, natural);
    } else {
        tr = dynamics::run_graphical(config, dynamics::ClockField(seed, cfg.h), params, horizon, natural);
    }

    ReplicaRecord rec;
    rec.L = L;
    rec.seed = seed;
    rec.engine = cfg.engine;
    rec.event_count = tr.event_count;
    rec.overflow_events = tr.overflow_events;
    rec.censored = !tr.extinction_time.has_value();
    rec.tau_plus = (rec.censored ? horizon : *tr.extinction_time) / scale;
    if (with_targets) {
        for (std::size_t k = 0; k < natural.size(); ++k) {
            // Snapshots after extinction are not recorded; the droplet is empty then.
            const PlanarShape droplet = k < tr.snapshots.size()
                                            ? lattice::droplet_shape(tr.snapshots[k]).scaled(1.0 / L)
                                            : PlanarShape{};
            rec.hausdorff.push_back(hausdorff_or_nan(droplet, targets[k]));
        }
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

double combined_se(double a, double b) { return std::sqrt(a * a + b * b); }

}  // namespace

PlanarShape ShapeSpec::build() const {
    switch (kind) {
        case Kind::square: return PlanarShape::rectangle(-1, -1, 1, 1);
        case Kind::rectangle: return PlanarShape::rectangle(box[0], box[1], box[2], box[3]);
        case Kind::disk: return PlanarShape::disk_with_tolerance({0, 0}, radius, 1e-4);
        case Kind::polygon: return PlanarShape::polygon(vertices);
    }
    return {};
}

void ExperimentConfig::validate() const {
    if (schema_version != kSchemaVersion)
        throw std::invalid_argument("unsupported schema_version " + std::to_string(schema_version));
    if (sizes.empty()) throw std::invalid_argument("empty list of sizes L");
    if (seeds.empty()) throw std::invalid_argument("empty seed list");
    for (int L : sizes)
        if (L < 1) throw std::invalid_argument("sizes must be positive");
    for (std::size_t k = 0; k < sample_times.size(); ++k) {
        if (!(sample_times[k] >= 0.0) || !std::isfinite(sample_times[k]))
            throw std::invalid_argument("sample times must be finite and nonnegative");
        if (k > 0 && sample_times[k] < sample_times[k - 1])
            throw std::invalid_argument("sample times must be non-decreasing");
    }
    lattice::FieldParameter{h, beta}.validate();
    if (engine == Engine::kmc && !std::isinf(beta))
        throw std::invalid_argument("the kmc engine needs beta = inf; use the graphical engine");
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (shape.kind == ShapeSpec::Kind::disk && !(shape.radius > 0.0 && shape.radius <= 1.0))
        throw std::invalid_argument("disk radius must lie in (0, 1]");
    const PlanarShape s = shape.build();
    if (s.empty()) throw std::invalid_argument("empty initial shape");
    const auto b = s.bounds();
    if (b.xmin < -1 - 1e-12 || b.ymin < -1 - 1e-12 || b.xmax > 1 + 1e-12 || b.ymax > 1 + 1e-12)
        throw std::invalid_argument("initial shape must lie in [-1, 1]^2");
    switch (target) {
        case Target::square:
            if (!is_axis_square(shape) || !(h > 0.0))
                throw std::invalid_argument("square target needs the square shape and h > 0");
            break;
        case Target::drift:
            if (!(h > 0.0)) throw std::invalid_argument("drift target needs h > 0");
            break;
        case Target::flow:
            if (h != 0.0) throw std::invalid_argument("flow target needs h = 0");
            break;
        default: break;
    }
}

json ExperimentConfig::to_json() const {
    json s = {{"kind", kind_name(shape.kind)}};
    if (shape.kind == ShapeSpec::Kind::disk) s["radius"] = shape.radius;
    if (shape.kind == ShapeSpec::Kind::rectangle) s["box"] = shape.box;
    if (shape.kind == ShapeSpec::Kind::polygon) {
        json v = json::array();
        for (const auto& p : shape.vertices) v.push_back({p.x, p.y});
        s["vertices"] = v;
    }
    return {{"schema_version", schema_version},
            {"shape", s},
            {"sizes", sizes},
            {"h", real_to_json(h)},
            {"beta", real_to_json(beta)},
            {"seeds", seeds},
            {"sample_times", sample_times},
            {"engine", engine_name(engine)},
            {"target", target_name(target)},
            {"horizon", horizon},
            {"output_dir", output_dir},
            {"workers", workers}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    static const std::vector<std::string> known = {"schema_version", "shape", "sizes", "h", "beta", "seeds",
                                                   "sample_times", "engine", "target", "horizon", "output_dir",
                                                   "workers"};
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw std::invalid_argument("unknown config key: " + key);
    if (!j.contains("schema_version")) throw std::invalid_argument("config lacks schema_version");

    ExperimentConfig c;
    c.schema_version = j.at("schema_version").get<int>();
    if (c.schema_version != kSchemaVersion)
        throw std::invalid_argument("unsupported schema_version " + std::to_string(c.schema_version));
    if (j.contains("shape")) {
        const json& s = j.at("shape");
        c.shape.kind = parse_enum<ShapeSpec::Kind>(s.at("kind").get<std::string>(),
                                                   {{"square", ShapeSpec::Kind::square},
                                                    {"rectangle", ShapeSpec::Kind::rectangle},
                                                    {"disk", ShapeSpec::Kind::disk},
                                                    {"polygon", ShapeSpec::Kind::polygon}},
                                                   "shape kind");
        if (s.contains("radius")) c.shape.radius = s.at("radius").get<double>();
        if (s.contains("box")) c.shape.box = s.at("box").get<std::array<double, 4>>();
        if (s.contains("vertices"))
            for (const auto& v : s.at("vertices")) c.shape.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    }
    if (j.contains("sizes")) c.sizes = j.at("sizes").get<std::vector<int>>();
    if (j.contains("h")) c.h = real_from_json(j.at("h"));
    if (j.contains("beta")) c.beta = real_from_json(j.at("beta"));
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("sample_times")) c.sample_times = j.at("sample_times").get<std::vector<double>>();
    if (j.contains("engine"))
        c.engine = parse_enum<Engine>(j.at("engine").get<std::string>(),
                                      {{"kmc", Engine::kmc}, {"graphical", Engine::graphical}}, "engine");
    if (j.contains("target"))
        c.target = parse_enum<Target>(j.at("target").get<std::string>(),
                                      {{"auto", Target::automatic},
                                       {"square", Target::square},
                                       {"drift", Target::drift},
                                       {"flow", Target::flow},
                                       {"none", Target::none}},
                                      "target");
    if (j.contains("horizon")) c.horizon = j.at("horizon").get<double>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("workers")) c.workers = j.at("workers").get<unsigned>();
    c.validate();
    return c;
}

double time_scale(double h, int L) {
    if (h == 0.0) return double(L) * double(L);
    if (std::isinf(h)) return double(L);
    return double(L) / std::tanh(h);
}

Target resolved_target(const ExperimentConfig& cfg) {
    if (cfg.target != Target::automatic) return cfg.target;
    if (!std::isinf(cfg.beta)) return Target::none;
    if (cfg.h == 0.0) return Target::flow;
    return is_axis_square(cfg.shape) ? Target::square : Target::drift;
}

PlanarShape limit_shape(const ExperimentConfig& cfg, double t) {
    switch (resolved_target(cfg)) {
        case Target::square: return limits::square_limit_shape(t);
        case Target::drift: return limits::weak_solution_shape(initial_support(cfg, kDriftAngles), t);
        case Target::flow: {
            const auto r = limits::evolve_flow(flow_start(cfg), 0.0, t);
            if (r.stop_time) return {};
            return geometry::shape_from_support(r.h);
        }
        default: return {};
    }
}

std::optional<double> limit_extinction_time(const ExperimentConfig& cfg) {
    if (!std::isinf(cfg.beta)) return std::nullopt;
    const PlanarShape s = cfg.shape.build();
    if (!s.is_convex()) return std::nullopt;
    // Shrinking area at rate 2 in the diffusive scaling.
    if (cfg.h == 0.0) return geometry::area_of(s) / 2.0;
    if (is_axis_square(cfg.shape)) return 4.0;
    // Bisection on emptiness of the drift flow.
    const auto h0 = initial_support(cfg, 1024);
    double lo = 0.0, hi = 1.0;
    while (!limits::weak_solution_shape(h0, hi).empty()) hi *= 2.0;
    for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        (limits::weak_solution_shape(h0, mid).empty() ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

Summary summarize(std::vector<double> xs) {
    Summary s;
    xs.erase(std::remove_if(xs.begin(), xs.end(), [](double x) { return std::isnan(x); }), xs.end());
    s.count = xs.size();
    if (xs.empty()) {
        s.mean = s.standard_error = s.q10 = s.median = s.q90 = std::nan("");
        return s;
    }
    s.mean = stats::mean(xs);
    s.standard_error = xs.size() > 1 ? stats::standard_error(xs) : 0.0;
    s.q10 = stats::quantile(xs, 0.1);
    s.median = stats::quantile(xs, 0.5);
    s.q90 = stats::quantile(xs, 0.9);
    return s;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult result;
    result.config = cfg;
    const Target target = resolved_target(cfg);
    const bool with_targets = target != Target::none;
    std::vector<PlanarShape> targets;
    if (with_targets)
        for (double t : cfg.sample_times) targets.push_back(limit_shape(cfg, t));
    result.tau_limit = limit_extinction_time(cfg);

    const PlanarShape shape = cfg.shape.build();
    std::vector<std::pair<int, std::uint64_t>> jobs;
    for (int L : cfg.sizes)
        for (std::uint64_t seed : cfg.seeds) jobs.emplace_back(L, seed);
    result.replicas.resize(jobs.size());

    unsigned workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(jobs.size()));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](unsigned w) {
        try {
            for (std::size_t i = next++; i < jobs.size(); i = next++)
                result.replicas[i] = run_replica(cfg, shape, jobs[i].first, jobs[i].second, targets, with_targets);
        } catch (...) {
            errors[w] = std::current_exception();
            next = jobs.size();
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    for (int L : cfg.sizes) {
        SizeAggregate agg;
        agg.L = L;
        std::vector<double> taus;
        std::vector<std::vector<double>> per_time(with_targets ? cfg.sample_times.size() : 0);
        for (const auto& r : result.replicas) {
            if (r.L != L) continue;
            taus.push_back(r.tau_plus);
            agg.censored += r.censored;
            agg.overflow_events += r.overflow_events;
            for (std::size_t k = 0; k < per_time.size(); ++k) {
                per_time[k].push_back(r.hausdorff[k]);
                agg.undefined_distances += std::isnan(r.hausdorff[k]);
            }
        }
        agg.tau_plus = summarize(taus);
        for (auto& v : per_time) agg.hausdorff.push_back(summarize(std::move(v)));
        result.sizes.push_back(std::move(agg));
    }
    return result;
}

SweepTable sweep_table(const ExperimentResult& result) {
    SweepTable table;
    const auto& cfg = result.config;
    table.has_hausdorff = resolved_target(cfg) != Target::none && !cfg.sample_times.empty();
    table.has_tau = result.tau_limit.has_value();
    for (int L : cfg.sizes) {
        std::vector<double> worst, tau_err;
        for (const auto& r : result.replicas) {
            if (r.L != L) continue;
            if (table.has_hausdorff) {
                double w = 0.0;
                for (double d : r.hausdorff) w = std::max(w, std::isnan(d) ? std::numeric_limits<double>::infinity() : d);
                worst.push_back(w);
            }
            if (table.has_tau) tau_err.push_back(std::abs(r.tau_plus - *result.tau_limit));
        }
        SweepRow row;
        row.L = L;
        const auto stats_of = [](const std::vector<double>& v, double& m, double& se) {
            if (v.empty()) {
                m = se = std::nan("");
                return;
            }
            m = stats::mean(v);
            se = v.size() > 1 ? stats::standard_error(v) : 0.0;
        };
        stats_of(worst, row.hausdorff_error, row.hausdorff_se);
        stats_of(tau_err, row.tau_error, row.tau_se);
        table.rows.push_back(row);
    }
    std::sort(table.rows.begin(), table.rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.L < b.L; });
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        const auto& a = table.rows[i - 1];
        const auto& b = table.rows[i];
        if (table.has_hausdorff && !(b.hausdorff_error <= a.hausdorff_error + combined_se(a.hausdorff_se, b.hausdorff_se)))
            table.hausdorff_non_increasing = false;
        if (table.has_tau && !(b.tau_error <= a.tau_error + combined_se(a.tau_se, b.tau_se)))
            table.tau_non_increasing = false;
    }
    return table;
}

SweepTable convergence_sweep(const ExperimentConfig& cfg) {
    std::vector<int> distinct = cfg.sizes;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 2) throw std::invalid_argument("a convergence sweep needs at least two sizes");
    return sweep_table(run_experiment(cfg));
}

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

json result_json(const ExperimentResult& r, const SweepTable* sweep) {
    json sizes = json::array();
    for (const auto& a : r.sizes) {
        json times = json::array();
        for (std::size_t k = 0; k < a.hausdorff.size(); ++k)
            times.push_back({{"t", r.config.sample_times[k]}, {"hausdorff", summary_json(a.hausdorff[k])}});
        sizes.push_back({{"L", a.L},
                         {"time_scale", time_scale(r.config.h, a.L)},
                         {"tau_plus", summary_json(a.tau_plus)},
                         {"censored", a.censored},
                         {"undefined_distances", a.undefined_distances},
                         {"overflow_events", a.overflow_events},
                         {"per_time", times}});
    }
    json out = {{"schema_version", kSchemaVersion},
                {"config", r.config.to_json()},
                {"target", target_name(resolved_target(r.config))},
                {"tau_limit", r.tau_limit ? json(*r.tau_limit) : json(nullptr)},
                {"replica_count", r.replicas.size()},
                {"sizes", sizes}};
    if (sweep) {
        json rows = json::array();
        for (const auto& row : sweep->rows)
            rows.push_back({{"L", row.L},
                            {"hausdorff_error", real_to_json(row.hausdorff_error)},
                            {"hausdorff_se", real_to_json(row.hausdorff_se)},
                            {"tau_error", real_to_json(row.tau_error)},
                            {"tau_se", real_to_json(row.tau_se)}});
        out["sweep"] = {{"rows", rows},
                        {"hausdorff_non_increasing", sweep->hausdorff_non_increasing},
                        {"tau_non_increasing", sweep->tau_non_increasing}};
    }
    return out;
}

std::string replicas_csv(const ExperimentResult& r) {
    std::ostringstream os;
    os << "L,seed,engine,t,hausdorff,tau_plus,censored,overflow_events,event_count\n";
    for (const auto& rec : r.replicas) {
        const auto row = [&](const std::string& t, double d) {
            os << rec.L << ',' << rec.seed << ',' << engine_name(rec.engine) << ',' << t << ',' << format_real(d)
               << ',' << format_real(rec.tau_plus) << ',' << (rec.censored ? 1 : 0) << ',' << rec.overflow_events
               << ',' << rec.event_count << '\n';
        };
        if (rec.hausdorff.empty()) row("", std::nan(""));
        for (std::size_t k = 0; k < rec.hausdorff.size(); ++k) row(format_real(r.config.sample_times[k]), rec.hausdorff[k]);
    }
    return os.str();
}

std::string timings_csv(const ExperimentResult& r) {
    std::ostringstream os;
    os << "L,seed,engine,wall_seconds,event_count\n";
    for (const auto& rec : r.replicas)
        os << rec.L << ',' << rec.seed << ',' << engine_name(rec.engine) << ',' << format_real(rec.wall_seconds) << ','
           << rec.event_count << '\n';
    return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write " + tmp.string());
        os << content;
        os.flush();
        if (!os) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_outputs(const ExperimentResult& r, const std::filesystem::path& dir, const SweepTable* sweep) {
    write_file_atomic(dir / "results.json", result_json(r, sweep).dump(2) + "\n");
    write_file_atomic(dir / "replicas.csv", replicas_csv(r));
    write_file_atomic(dir / "timings.csv", timings_csv(r));
}

namespace {

std::vector<geometry::Point> without_collinear(const geometry::Ring& ring) {
    std::vector<geometry::Point> out;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = ring[(i + n - 1) % n];
        const auto& b = ring[i];
        const auto& c = ring[(i + 1) % n];
        if (std::abs(geometry::cross(b - a, c - b)) > 1e-12) out.push_back(b);
    }
    return out;
}

}  // namespace

std::string render_snapshot(const std::vector<Layer>& layers, const RenderStyle& style) {
    constexpr double kExtent = 1.2;
    const double px = style.pixels;
    const auto map = [&](geometry::Point p) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3f %.3f", (p.x + kExtent) / (2 * kExtent) * px,
                      (kExtent - p.y) / (2 * kExtent) * px);
        return std::string(buf);
    };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.pixels << "\" height=\"" << style.pixels
       << "\" viewBox=\"0 0 " << style.pixels << ' ' << style.pixels << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << style.pixels << "\" height=\"" << style.pixels
       << "\" fill=\"#ffffff\"/>\n";
    bool drew = false;
    for (const auto& layer : layers) {
        if (layer.shape.empty()) continue;
        std::string d;
        for (const auto& ring : layer.shape.rings()) {
            const auto pts = without_collinear(ring);
            if (pts.size() < 3) continue;
            for (std::size_t i = 0; i < pts.size(); ++i) d += (i ? " L " : (d.empty() ? "M " : " M ")) + map(pts[i]);
            d += " Z";
        }
        if (d.empty()) continue;
        drew = true;
        os << "<path d=\"" << d << "\" fill=\"" << layer.fill << "\" fill-opacity=\"" << format_real(layer.fill_opacity)
           << "\" fill-rule=\"evenodd\" stroke=\"" << layer.stroke << "\" stroke-width=\""
           << format_real(style.stroke_width) << "\"/>\n";
    }
    if (!drew)
        os << "<text x=\"" << style.pixels / 2 << "\" y=\"" << style.pixels / 2
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"24\">" << style.empty_label
           << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

std::vector<Layer> overlay_layers(const PlanarShape& droplet, const PlanarShape& limit, double delta) {
    std::vector<Layer> layers;
    if (!limit.empty() && delta > 0.0) {
        const PlanarShape outer = geometry::offset_shape(limit, delta);
        const PlanarShape inner = geometry::offset_shape(limit, -delta);
        std::vector<geometry::Ring> rings = outer.rings();
        for (auto ring : inner.rings()) {
            std::reverse(ring.begin(), ring.end());
            rings.push_back(std::move(ring));
        }
        Layer band;
        band.shape = PlanarShape::from_rings(std::move(rings));
        band.stroke = "#9ecae1";
        band.fill = "#9ecae1";
        band.fill_opacity = 0.4;
        layers.push_back(std::move(band));
    }
    layers.push_back({limit, "#d62728", "none", 1.0});
    layers.push_back({droplet, "#000000", "#636363", 0.5});
    return layers;
}

}  // namespace isingdrop::harness
