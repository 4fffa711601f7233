#include "isingdrop/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

namespace isingdrop::limits {

using geometry::HalfPlane;
using geometry::Point;

double anisotropy_a(double theta) {
    const double s = std::abs(std::cos(theta)) + std::abs(std::sin(theta));
    return 1.0 / (2.0 * s * s);
}

double drift_b(double theta) {
    const double s2 = std::abs(std::sin(2.0 * theta));
    return s2 * (std::abs(std::cos(theta)) + std::abs(std::sin(theta))) / (1.0 + s2);
}

double drift_speed(double theta) { return 0.5 * drift_b(theta); }

SupportFunction square_support(std::size_t n) {
    return SupportFunction::sample(n, [](double th) { return std::abs(std::cos(th)) + std::abs(std::sin(th)); });
}

SupportFunction disk_support(std::size_t n, double r) {
    return SupportFunction::sample(n, [r](double) { return r; });
}

FlowResult evolve_flow(const SupportFunction& h0, double alpha, double t, FlowOptions options) {
    if (h0.size() < 8) throw std::invalid_argument("evolve_flow: need at least 8 angles");
    if (alpha < 0.0 || t < 0.0) throw std::invalid_argument("evolve_flow: alpha and t must be >= 0");
    const std::size_t n = h0.size();
    const double dth = h0.step();

    std::vector<double> a(n), drift(n), rho(n);
    double a_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = anisotropy_a(h0.angle(i));
        drift[i] = alpha * drift_speed(h0.angle(i));
        a_max = std::max(a_max, a[i]);
    }

    FlowResult out;
    out.h = h0;
    double mean_rho = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean_rho += h0.radius_of_curvature(i);
    mean_rho /= static_cast<double>(n);
    if (!(h0.min_radius_of_curvature() > 0.0))
        throw std::invalid_argument("evolve_flow: initial support function is not strictly convex");
    const double collapse = options.collapse_fraction * mean_rho;

    auto record = [&] {
        out.history_times.push_back(out.time);
        out.history_areas.push_back(out.h.enclosed_area());
    };
    record();
    SupportFunction& h = out.h;
    while (out.time < t) {
        double rho_min = INFINITY;
        for (std::size_t i = 0; i < n; ++i) {
            rho[i] = h.radius_of_curvature(i);
            rho_min = std::min(rho_min, rho[i]);
        }
        if (rho_min < collapse) {
            out.stop_time = out.time;
            break;
        }
        const double bound = options.courant * dth * dth * rho_min * rho_min / a_max;
        double dt = options.dt > 0.0 ? std::min(options.dt, bound) : bound;
        dt = std::min(dt, t - out.time);
        for (std::size_t i = 0; i < n; ++i) h[i] -= dt * (a[i] / rho[i] + drift[i]);
        out.time += dt;
        ++out.steps;
        if (out.steps % options.history_stride == 0) record();
    }
    if (out.history_times.back() != out.time) record();
    return out;
}

double rost_profile_g(double x, double t) {
    if (t < 0.0) throw std::invalid_argument("rost_profile_g: t must be >= 0");
    const double ax = std::abs(x);
    if (ax >= t) return ax;
    return (x * x + t * t) / (2.0 * t);
}

double inscribed_half_width(double t) { return 2.0 * std::sqrt(t) - t; }

namespace {

constexpr double kFrameReach = 4.0;  // |x| in the diagonal frame covering [-1,1]^2

/// Epigraph of a convex profile y >= f(x) in the diagonal frame, mapped to
/// the plane and truncated far outside [-1,1]^2. Curved on [-c, c].
template <class F>
PlanarShape diagonal_epigraph(F&& f, double c, std::size_t samples) {
    std::vector<double> xs{-kFrameReach};
    c = std::min(c, kFrameReach);
    if (c > 1e-14) {
        for (std::size_t k = 0; k < samples; ++k)
            xs.push_back(-c + 2.0 * c * static_cast<double>(k) / static_cast<double>(samples - 1));
    } else {
        xs.push_back(0.0);
    }
    xs.push_back(kFrameReach);
    std::vector<Point> pts;
    pts.reserve(xs.size() + 2);
    auto plane = [](double x, double y) { return Point{(x + y) / 2.0, (y - x) / 2.0}; };
    for (double x : xs) pts.push_back(plane(x, f(x)));
    pts.push_back(plane(kFrameReach, 2.0 * kFrameReach));
    pts.push_back(plane(-kFrameReach, 2.0 * kFrameReach));
    return PlanarShape::polygon(std::move(pts));
}

PlanarShape quarter_turn(const PlanarShape& s, int k) {
    std::vector<Point> v = s.vertices();
    for (Point& p : v)
        for (int r = 0; r < k; ++r) p = {-p.y, p.x};
    return PlanarShape::polygon(std::move(v));
}

PlanarShape four_corner_intersection(const PlanarShape& corner) {
    PlanarShape out = PlanarShape::rectangle(-1.0, -1.0, 1.0, 1.0);
    for (int k = 0; k < 4 && !out.empty(); ++k) out = geometry::intersect_convex(out, quarter_turn(corner, k));
    return out;
}

}  // namespace

PlanarShape square_limit_shape(double t, std::size_t samples) {
    if (t < 0.0) throw std::invalid_argument("square_limit_shape: t must be >= 0");
    if (t >= 4.0) return {};
    const PlanarShape corner =
        diagonal_epigraph([t](double x) { return rost_profile_g(x, t) - 2.0; }, t, std::max<std::size_t>(samples, 3));
    return four_corner_intersection(corner);
}

PlanarShape weak_solution_shape(const SupportFunction& h0, double t,
                                const std::function<double(double)>& speed) {
    std::vector<HalfPlane> planes(h0.size());
    for (std::size_t i = 0; i < h0.size(); ++i) {
        const double th = h0.angle(i);
        planes[i] = {th, h0[i] - speed(th) * t};
    }
    return geometry::intersect_halfplanes(planes);
}

double clipped_profile(double x, double t, double delta) {
    const double c = inscribed_half_width(t) - delta;
    const double ax = std::abs(x);
    if (ax <= c) return rost_profile_g(x, t) - 2.0;
    return ax - c + rost_profile_g(c, t) - 2.0;
}

ClippedShape clipped_shape(double t, double delta, std::size_t samples) {
    if (!(delta > 0.0)) throw std::invalid_argument("clipped_shape: delta must be > 0");
    if (t < 1.0 || t > 4.0 * (1.0 - delta)) throw std::invalid_argument("clipped_shape: t outside [1, 4(1 - delta)]");
    ClippedShape out;
    out.d = inscribed_half_width(t);
    if (out.d < delta) throw std::invalid_argument("clipped_shape: d(t) < delta");

    // gbar(x) + x is nondecreasing (slopes of gbar are >= -1), negative at 0
    // and positive at 2.
    auto f = [&](double x) { return clipped_profile(x, t, delta) + x; };
    boost::uintmax_t iterations = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        f, 0.0, 2.0, boost::math::tools::eps_tolerance<double>(52), iterations);
    out.r = 0.5 * (bracket.first + bracket.second);

    const double c = out.d - delta;
    out.shape = four_corner_intersection(
        diagonal_epigraph([&](double x) { return clipped_profile(x, t, delta); }, c, std::max<std::size_t>(samples, 3)));
    return out;
}

double Profile1D::at(double x) const {
    if (values.empty()) throw std::logic_error("Profile1D: empty");
    const double s = (x - x0) / dx;
    const double last = static_cast<double>(values.size() - 1);
    if (s < -1e-9 || s > last + 1e-9) throw std::out_of_range("Profile1D: x outside the grid");
    const double c = std::clamp(s, 0.0, last);
    const auto j = std::min(static_cast<std::size_t>(c), values.size() - 1);
    if (j + 1 >= values.size()) return values.back();
    const double w = c - static_cast<double>(j);
    return values[j] + w * (values[j + 1] - values[j]);
}

bool Profile1D::is_lipschitz(double tol) const {
    for (std::size_t j = 0; j + 1 < values.size(); ++j)
        if (std::abs(values[j + 1] - values[j]) > (1.0 + tol) * lipschitz * dx) return false;
    return true;
}

double viscosity_solution(const Profile1D& u0, double x, double t) {
    if (t < 0.0) throw std::invalid_argument("viscosity_solution: t must be >= 0");
    if (t == 0.0) return u0.at(x);
    const double lo = std::max(u0.x0, x - t);
    const double hi = std::min(u0.x_max(), x + t);
    if (lo > hi) throw std::out_of_range("viscosity_solution: x outside the grid");

    const std::size_t last = u0.size() - 1;
    const auto seg_lo = static_cast<std::size_t>(std::max(0.0, std::floor((lo - u0.x0) / u0.dx)));
    const auto seg_hi = std::min(last, static_cast<std::size_t>(std::ceil((hi - u0.x0) / u0.dx)));
    double best = INFINITY;
    // Inside [x - t, x + t] the kernel is the parabola, so each linear piece
    // has the closed-form minimizer y = x - slope * t.
    const std::size_t j_begin = std::min(seg_lo, last - 1);
    const std::size_t j_end = std::max(std::min(seg_hi, last), j_begin + 1);
    for (std::size_t j = j_begin; j < j_end; ++j) {
        const double ya = std::max(u0.x(j), lo);
        const double yb = std::min(u0.x(j + 1), hi);
        if (ya > yb) continue;
        const double slope = (u0.values[j + 1] - u0.values[j]) / u0.dx;
        const double y = std::clamp(x - slope * t, ya, yb);
        const double u = u0.values[j] + slope * (y - u0.x(j));
        const double z = x - y;
        best = std::min(best, u + (z * z + t * t) / (2.0 * t));
    }
    return best;
}

Profile1D viscosity_solution(const Profile1D& u0, double t) {
    Profile1D out = u0;
    for (std::size_t j = 0; j < u0.size(); ++j) out.values[j] = viscosity_solution(u0, u0.x(j), t);
    return out;
}

namespace {

/// Sine coefficients c_k (k = 1..m-1) of interior values w_1..w_{m-1}.
std::vector<double> sine_coefficients(const std::vector<double>& w, std::size_t m) {
    std::vector<double> c(m, 0.0);
    const double base = std::numbers::pi / static_cast<double>(m);
    for (std::size_t k = 1; k < m; ++k) {
        double s = 0.0;
        for (std::size_t j = 1; j < m; ++j) s += w[j] * std::sin(base * static_cast<double>(k * j % (2 * m)));
        c[k] = 2.0 * s / static_cast<double>(m);
    }
    return c;
}

std::vector<double> sine_synthesis(const std::vector<double>& c, std::size_t m) {
    std::vector<double> w(m + 1, 0.0);
    const double base = std::numbers::pi / static_cast<double>(m);
    for (std::size_t j = 1; j < m; ++j) {
        double s = 0.0;
        for (std::size_t k = 1; k < m; ++k) s += c[k] * std::sin(base * static_cast<double>(k * j % (2 * m)));
        w[j] = s;
    }
    return w;
}

}  // namespace

Profile1D heat_dirichlet(const Profile1D& v0, double t) {
    if (v0.size() < 3) throw std::invalid_argument("heat_dirichlet: need at least 3 nodes");
    if (t < 0.0) throw std::invalid_argument("heat_dirichlet: t must be >= 0");
    double scale = 0.0;
    for (double v : v0.values) scale = std::max(scale, std::abs(v));
    const double tol = 1e-12 * std::max(1.0, scale);
    if (std::abs(v0.values.front()) > tol || std::abs(v0.values.back()) > tol)
        throw std::invalid_argument("heat_dirichlet: boundary values must be zero");

    const std::size_t m = v0.size() - 1;
    const double length = v0.dx * static_cast<double>(m);
    std::vector<double> c = sine_coefficients(v0.values, m);
    for (std::size_t k = 1; k < m; ++k) {
        const double wave = static_cast<double>(k) * std::numbers::pi / length;
        c[k] *= std::exp(-0.5 * wave * wave * t);
    }
    Profile1D out = v0;
    out.values = sine_synthesis(c, m);
    return out;
}

std::vector<double> discrete_heat_mean(const std::vector<double>& v0, double t) {
    if (v0.size() < 2) throw std::invalid_argument("discrete_heat_mean: need at least 2 nodes");
    const std::size_t m = v0.size() - 1;
    const double a = v0.front();
    const double b = v0.back();
    std::vector<double> w(m + 1);
    for (std::size_t j = 0; j <= m; ++j)
        w[j] = v0[j] - (a + (b - a) * static_cast<double>(j) / static_cast<double>(m));
    std::vector<double> c = sine_coefficients(w, m);
    for (std::size_t k = 1; k < m; ++k)
        c[k] *= std::exp((std::cos(std::numbers::pi * static_cast<double>(k) / static_cast<double>(m)) - 1.0) * t);
    std::vector<double> out = sine_synthesis(c, m);
    for (std::size_t j = 0; j <= m; ++j) out[j] += a + (b - a) * static_cast<double>(j) / static_cast<double>(m);
    return out;
}

namespace {

template <class Rhs>
Profile1D explicit_march(const Profile1D& u0, double t, PdeOptions options, double bound, Rhs&& rhs) {
    if (u0.size() < 3) throw std::invalid_argument("pde: need at least 3 nodes");
    if (t < 0.0) throw std::invalid_argument("pde: t must be >= 0");
    if (options.dt > bound) throw std::invalid_argument("pde: time step violates the stability bound");
    const double dt_max = options.dt > 0.0 ? options.dt : 0.8 * bound;
    const std::size_t n = u0.size();
    const double dx = u0.dx;
    std::vector<double> u = u0.values, next(n);
    double now = 0.0;
    while (now < t) {
        const double dt = std::min(dt_max, t - now);
        for (std::size_t j = 0; j < n; ++j) {
            if (options.edges == EdgeRule::dirichlet && (j == 0 || j + 1 == n)) {
                next[j] = u[j];
                continue;
            }
            const double left = j > 0 ? u[j - 1] : 2.0 * u[0] - u[1];
            const double right = j + 1 < n ? u[j + 1] : 2.0 * u[n - 1] - u[n - 2];
            const double ux = (right - left) / (2.0 * dx);
            const double uxx = (right - 2.0 * u[j] + left) / (dx * dx);
            next[j] = u[j] + dt * rhs(ux, uxx);
        }
        u.swap(next);
        now += dt;
    }
    Profile1D out = u0;
    out.values = std::move(u);
    return out;
}

}  // namespace

Profile1D wasep_pde(const Profile1D& u0, double t, PdeOptions options) {
    const double bound = u0.dx * u0.dx;
    return explicit_march(u0, t, options, bound, [](double ux, double uxx) {
        const double slope_gap = 1.0 - ux;
        return 0.5 * uxx + 0.5 * slope_gap * slope_gap;
    });
}

Profile1D pole_pde(const Profile1D& w0, double t, PdeOptions options) {
    const double bound = 0.5 * w0.dx * w0.dx;
    return explicit_march(w0, t, options, bound,
                          [](double wx, double wxx) { return wxx / (1.0 + wx * wx); });
}

}  // namespace isingdrop::limits
