#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "isingdrop/dynamics.hpp"
#include "isingdrop/harness.hpp"
#include "isingdrop/limits.hpp"
#include "isingdrop/particles.hpp"

namespace py = pybind11;
using namespace isingdrop;

namespace {

py::array_t<double> vertices_of(const geometry::PlanarShape& s) {
    if (s.empty()) return py::array_t<double>(std::vector<py::ssize_t>{0, 2});
    const auto& v = s.vertices();
    py::array_t<double> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size()), 2});
    auto m = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < v.size(); ++i) {
        m(i, 0) = v[i].x;
        m(i, 1) = v[i].y;
    }
    return out;
}

geometry::PlanarShape polygon_of(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2 || a.shape(1) != 2) throw std::invalid_argument("expected an (n, 2) array of vertices");
    auto r = a.unchecked<2>();
    std::vector<geometry::Point> pts;
    for (py::ssize_t i = 0; i < r.shape(0); ++i) pts.push_back({r(i, 0), r(i, 1)});
    return geometry::PlanarShape::polygon(std::move(pts));
}

limits::Profile1D profile_of(double x0, double dx, const std::vector<double>& values) {
    limits::Profile1D p;
    p.x0 = x0;
    p.dx = dx;
    p.values = values;
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Zero-temperature Ising droplet dynamics: simulation engines and limit shapes";

    m.def("anisotropy_a", &limits::anisotropy_a, py::arg("theta"));
    m.def("drift_b", &limits::drift_b, py::arg("theta"));
    m.def("drift_speed", &limits::drift_speed, py::arg("theta"));
    m.def("rost_profile_g", &limits::rost_profile_g, py::arg("x"), py::arg("t"));
    m.def("inscribed_half_width", &limits::inscribed_half_width, py::arg("t"));

    m.def("square_limit_shape", [](double t, std::size_t samples) { return vertices_of(limits::square_limit_shape(t, samples)); },
          py::arg("t"), py::arg("samples") = 4096, "Vertices (n, 2) of the explicit positive-field square shape.");
    m.def("weak_solution_square", [](double t, std::size_t angles) {
              return vertices_of(limits::weak_solution_shape(limits::square_support(angles), t));
          },
          py::arg("t"), py::arg("angles") = 4096);
    m.def("clipped_shape", [](double t, double delta, std::size_t samples) {
              const auto c = limits::clipped_shape(t, delta, samples);
              return py::make_tuple(vertices_of(c.shape), c.d, c.r);
          },
          py::arg("t"), py::arg("delta"), py::arg("samples") = 4096, "(vertices, d, r)");
    m.def("evolve_flow_disk", [](double radius, double t, double alpha, std::size_t angles) {
              const auto r = limits::evolve_flow(limits::disk_support(angles, radius), alpha, t);
              py::dict out;
              out["time"] = r.time;
              out["stop_time"] = r.stop_time ? py::cast(*r.stop_time) : py::none();
              out["area"] = r.h.enclosed_area();
              out["history_times"] = r.history_times;
              out["history_areas"] = r.history_areas;
              return out;
          },
          py::arg("radius"), py::arg("t"), py::arg("alpha") = 0.0, py::arg("angles") = 256);
    m.def("viscosity_solution", [](double x0, double dx, const std::vector<double>& u0, double t) {
              return limits::viscosity_solution(profile_of(x0, dx, u0), t).values;
          },
          py::arg("x0"), py::arg("dx"), py::arg("u0"), py::arg("t"));
    m.def("heat_dirichlet", [](double x0, double dx, const std::vector<double>& v0, double t) {
              return limits::heat_dirichlet(profile_of(x0, dx, v0), t).values;
          },
          py::arg("x0"), py::arg("dx"), py::arg("v0"), py::arg("t"));

    m.def("area", [](const py::array_t<double>& v) { return geometry::area_of(polygon_of(v)); }, py::arg("vertices"));
    m.def("hausdorff_distance", [](const py::array_t<double>& a, const py::array_t<double>& b) {
              return geometry::hausdorff_distance(polygon_of(a), polygon_of(b));
          },
          py::arg("a"), py::arg("b"));

    m.def("extinction_time", [](int L, double h, std::uint64_t seed, double horizon) {
              const auto cfg = lattice::init_from_shape(geometry::PlanarShape::rectangle(-1, -1, 1, 1), L,
                                                        lattice::BoundaryRule::all_plus);
              const auto r = dynamics::extinction_time(cfg, lattice::FieldParameter{h}, seed, horizon);
              return py::make_tuple(r.time, r.censored, r.event_count);
          },
          py::arg("L"), py::arg("h"), py::arg("seed"), py::arg("horizon") = 1e15,
          "(time, censored, events) for the square droplet of half width L.");

    m.def("exclusion_step", [](std::int64_t half_length, double h, std::uint64_t seed, std::vector<double> times) {
              const auto occ = particles::step_occupation(half_length);
              const double horizon = times.empty() ? 0.0 : *std::max_element(times.begin(), times.end());
              const auto tr = particles::simulate_exclusion(occ, lattice::FieldParameter{h},
                                                            dynamics::ClockField(seed, h), horizon, times);
              std::vector<std::vector<std::int64_t>> heights;
              for (const auto& s : tr.snapshots) heights.push_back(particles::height_from_occupation(s).values);
              return py::make_tuple(-half_length, heights);
          },
          py::arg("half_length"), py::arg("h"), py::arg("seed"), py::arg("times"),
          "Step initial condition; returns (first x, heights at each natural time).");

    m.def("run_experiment", [](const std::string& config_json) {
              const auto cfg = harness::ExperimentConfig::from_json(nlohmann::json::parse(config_json));
              const auto result = harness::run_experiment(cfg);
              const auto table = harness::sweep_table(result);
              return harness::result_json(result, table.rows.size() >= 2 ? &table : nullptr).dump();
          },
          py::arg("config_json"), "Run a JSON experiment config; returns the results document as JSON text.");
    m.def("render_square_overlay", [](double t, double delta) {
              const auto shape = limits::square_limit_shape(t, 1024);
              return harness::render_snapshot(harness::overlay_layers({}, shape, delta));
          },
          py::arg("t"), py::arg("delta") = 0.05);

    py::register_exception<std::invalid_argument>(m, "InvalidArgument", PyExc_ValueError);
}
