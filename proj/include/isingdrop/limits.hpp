#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "isingdrop/geometry.hpp"

namespace isingdrop::limits {

using geometry::PlanarShape;
using geometry::SupportFunction;

/// Mobility of the zero-field flow: 1 / (2 (|cos| + |sin|)^2).
double anisotropy_a(double theta);
/// Drift at positive field: |sin 2t| (|cos t| + |sin t|) / (1 + |sin 2t|).
double drift_b(double theta);
/// Normal speed of the positive-field boundary per unit of rescaled time,
/// b / 2. The explicit corner solution recedes at sqrt(2)/4 along the
/// diagonal while b(pi/4) = sqrt(2)/2, so every shape built here uses the
/// halved drift.
double drift_speed(double theta);

/// Support function of [-1, 1]^2: |cos| + |sin|.
SupportFunction square_support(std::size_t n);
/// Support function of the disk of radius r centered at the origin.
SupportFunction disk_support(std::size_t n, double r);

struct FlowOptions {
    /// Requested step; 0 picks the stability bound. Larger requests are capped.
    double dt = 0.0;
    /// Safety factor c in dt <= c * dtheta^2 * min(h + h'')^2 / max a.
    double courant = 0.25;
    /// Collapse declared once min(h + h'') drops below this fraction of its
    /// initial mean.
    double collapse_fraction = 1e-3;
    /// Area recorded every this many steps (and at the end).
    std::size_t history_stride = 64;
};

struct FlowResult {
    SupportFunction h;
    /// Time actually reached (t, or the collapse time).
    double time = 0.0;
    /// First time the convexity certificate failed, if it did.
    std::optional<double> stop_time;
    std::size_t steps = 0;
    std::vector<double> history_times;
    std::vector<double> history_areas;
};

/// Explicit integration of d/dt h = -a k - alpha * drift_speed with
/// k = 1 / (h + h''), up to time t or collapse.
FlowResult evolve_flow(const SupportFunction& h0, double alpha, double t, FlowOptions options = {});

/// (x^2 + t^2) / (2t) for |x| <= t, |x| otherwise.
double rost_profile_g(double x, double t);

/// Inscribed half width 2 sqrt(t) - t (t in [1, 4]).
double inscribed_half_width(double t);

/// Intersection of the four quarter-turns of the epigraph of g(., t) - 2,
/// read in the diagonal frame. Empty for t >= 4. `samples` points per curved arc.
PlanarShape square_limit_shape(double t, std::size_t samples = 4096);

/// Intersection over the angle grid of {x : x . v <= h(theta) - speed(theta) t}.
PlanarShape weak_solution_shape(const SupportFunction& h0, double t,
                                const std::function<double(double)>& speed = drift_speed);

struct ClippedShape {
    PlanarShape shape;
    double d = 0.0;
    double r = 0.0;
};

/// Corner profile flattened to slope 1 beyond d(t) - delta, its four rotated
/// epigraphs intersected, and r(t) the root of gbar(x, t) = -x.
/// Requires 1 <= t <= 4 (1 - delta) and d(t) >= delta.
ClippedShape clipped_shape(double t, double delta, std::size_t samples = 4096);
/// The flattened corner profile itself.
double clipped_profile(double x, double t, double delta);

/// Uniform grid profile on [x0, x0 + (n - 1) dx]; linear between nodes.
struct Profile1D {
    double x0 = 0.0;
    double dx = 1.0;
    std::vector<double> values;
    double lipschitz = 1.0;

    std::size_t size() const { return values.size(); }
    double x(std::size_t j) const { return x0 + dx * static_cast<double>(j); }
    double x_max() const { return x(values.size() - 1); }
    double at(double x) const;
    /// |u(x_{j+1}) - u(x_j)| <= (1 + tol) lipschitz dx everywhere.
    bool is_lipschitz(double tol = 1e-9) const;

    template <class F>
    static Profile1D sample(double a, double b, std::size_t n, F&& f) {
        Profile1D p;
        p.x0 = a;
        p.dx = (b - a) / static_cast<double>(n - 1);
        p.values.resize(n);
        for (std::size_t j = 0; j < n; ++j) p.values[j] = f(p.x(j));
        return p;
    }
};

/// inf_y { u0(y) + g(x - y, t) } over the piecewise-linear u0, minimized
/// exactly segment by segment. x must lie in the profile's interval.
double viscosity_solution(const Profile1D& u0, double x, double t);
/// Same, at every node of u0's grid.
Profile1D viscosity_solution(const Profile1D& u0, double t);

/// d/dt v = v'' / 2 on [x0, x_max] with zero Dirichlet data, by the sine
/// series of the nodal values. Rejects nonzero end values.
Profile1D heat_dirichlet(const Profile1D& v0, double t);

/// Exact solution of the lattice equation d/dt v_x = (v_{x+1} + v_{x-1} - 2 v_x) / 2
/// with the two end values held fixed. This is the evolution of the mean
/// height of the symmetric exclusion interface.
std::vector<double> discrete_heat_mean(const std::vector<double>& v0, double t);

enum class EdgeRule {
    extrapolate,  // ghost nodes continue the edge slope
    dirichlet,    // end values held fixed
};

struct PdeOptions {
    /// 0 picks 80% of the stability bound; larger values are rejected.
    double dt = 0.0;
    EdgeRule edges = EdgeRule::extrapolate;
};

/// d/dt u = u'' / 2 + (1 - u')^2 / 2, explicit differences.
Profile1D wasep_pde(const Profile1D& u0, double t, PdeOptions options = {});
/// d/dt w = w'' / (1 + w'^2), explicit differences.
Profile1D pole_pde(const Profile1D& w0, double t, PdeOptions options = {});

}  // namespace isingdrop::limits
