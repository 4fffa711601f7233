#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "isingdrop/limits.hpp"
#include "isingdrop/particles.hpp"
#include "isingdrop/stats.hpp"

using namespace isingdrop::limits;
using isingdrop::geometry::PlanarShape;
using isingdrop::geometry::Point;
constexpr double pi = std::numbers::pi;

namespace {

double integrate(auto f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

// Membership straight from the definition: each quarter turn of p, read in
// the diagonal frame, lies above g - 2.
bool in_square_limit(Point p, double t) {
    for (int k = 0; k < 4; ++k) {
        const double x = p.x - p.y, y = p.x + p.y;
        if (y < rost_profile_g(x, t) - 2.0) return false;
        p = {p.y, -p.x};
    }
    return true;
}

// Explicit-difference oracle for v_t = v_xx / 2 with zero ends.
std::vector<double> heat_oracle(std::vector<double> v, double dx, double t) {
    const double dt = 0.2 * dx * dx;
    const int steps = int(std::ceil(t / dt));
    const double h = t / steps;
    std::vector<double> next(v.size(), 0.0);
    for (int s = 0; s < steps; ++s) {
        for (std::size_t j = 1; j + 1 < v.size(); ++j) next[j] = v[j] + 0.5 * h * (v[j + 1] - 2 * v[j] + v[j - 1]) / (dx * dx);
        v.swap(next);
    }
    return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b, std::size_t stride_b = 1) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j * stride_b]));
    return m;
}

Profile1D random_lipschitz(std::mt19937_64& rng, double a, double b, std::size_t n) {
    std::uniform_real_distribution<double> slope(-1.0, 1.0);
    Profile1D p = Profile1D::sample(a, b, n, [](double) { return 0.0; });
    double s = slope(rng);
    for (std::size_t j = 1; j < n; ++j) {
        if (j % 20 == 0) s = slope(rng);
        p.values[j] = p.values[j - 1] + s * p.dx;
    }
    return p;
}

}  // namespace

TEST_CASE("anisotropy values, periodicity and integral") {
    CHECK(anisotropy_a(0.0) == doctest::Approx(0.5));
    CHECK(anisotropy_a(pi / 4) == doctest::Approx(0.25));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int k = 0; k < 1000; ++k) {
        const double th = u(rng);
        CHECK(anisotropy_a(th + pi / 2) == doctest::Approx(anisotropy_a(th)).epsilon(1e-12));
        CHECK(anisotropy_a(-th) == doctest::Approx(anisotropy_a(th)).epsilon(1e-12));
        CHECK(drift_b(th + pi / 2) == doctest::Approx(drift_b(th)).epsilon(1e-12));
        CHECK(drift_b(th) >= 0.0);
    }
    double total = 0.0;
    for (int q = 0; q < 4; ++q) total += integrate([](double th) { return anisotropy_a(th); }, q * pi / 2, (q + 1) * pi / 2);
    CHECK(std::abs(total - 2.0) < 1e-10);
}

TEST_CASE("drift values and symmetry") {
    CHECK(drift_b(0.0) == 0.0);
    CHECK(std::abs(drift_b(pi / 2)) < 1e-15);
    CHECK(drift_b(pi / 4) == doctest::Approx(std::sqrt(2.0) / 2));
    for (int k = 0; k <= 100; ++k) {
        const double th = k * (pi / 4) / 100;
        CHECK(drift_b(pi / 4 - th) == doctest::Approx(drift_b(pi / 4 + th)).epsilon(1e-12));
    }
    CHECK(drift_speed(pi / 4) == doctest::Approx(std::sqrt(2.0) / 4));
}

TEST_CASE("Rost profile values and its equation") {
    CHECK(rost_profile_g(0, 1) == 0.5);
    CHECK(rost_profile_g(1, 1) == 1.0);
    CHECK(rost_profile_g(2, 1) == 2.0);
    CHECK(rost_profile_g(-0.3, 0) == 0.3);
    const double d = 1e-4;
    for (double t : {0.5, 1.0, 2.0}) {
        for (double x : {-0.4 * t, 0.0, 0.3 * t, 0.8 * t, 1.5 * t}) {
            const double gt = (rost_profile_g(x, t + d) - rost_profile_g(x, t - d)) / (2 * d);
            const double gx = (rost_profile_g(x + d, t) - rost_profile_g(x - d, t)) / (2 * d);
            CHECK(std::abs(gt - 0.5 * (1 - gx * gx)) < 1e-7);
        }
    }
}

TEST_CASE("square limit shape: endpoints, area and inscribed square") {
    const PlanarShape start = square_limit_shape(0.0);
    CHECK(hausdorff_distance(start, PlanarShape::rectangle(-1, -1, 1, 1)) < 1e-12);
    CHECK(square_limit_shape(4.0).empty());
    CHECK(square_limit_shape(5.0).empty());

    for (double t : {0.1, 0.25, 0.5, 0.75, 1.0}) {
        // Each corner loses (1/2) * integral of g - |x| (frame Jacobian 1/2).
        const double lost = 0.5 * integrate([t](double x) { return rost_profile_g(x, t) - std::abs(x); }, -t, t);
        CHECK(4.0 - 4.0 * lost == doctest::Approx(4.0 - 2.0 / 3.0 * t * t).epsilon(1e-12));
        CHECK(std::abs(area_of(square_limit_shape(t)) - (4.0 - 4.0 * lost)) < 1e-6);
    }

    CHECK(inscribed_half_width(1.0) == 1.0);
    CHECK(inscribed_half_width(4.0) == 0.0);
    for (double t : {1.5, 2.0, 3.0, 3.9}) {
        const auto b = square_limit_shape(t).bounds();
        CHECK(b.xmax == doctest::Approx(inscribed_half_width(t)).epsilon(1e-6));
        CHECK(-b.ymin == doctest::Approx(inscribed_half_width(t)).epsilon(1e-6));
    }
}

TEST_CASE("square limit shape agrees with direct membership") {
    for (double t : {0.7, 2.0, 3.0}) {
        const int n = 800;
        std::size_t inside = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) inside += in_square_limit({-1 + (i + 0.5) * 2.0 / n, -1 + (j + 0.5) * 2.0 / n}, t);
        CHECK(area_of(square_limit_shape(t)) == doctest::Approx(inside * 4.0 / (n * n)).epsilon(5e-3));
    }
}

TEST_CASE("weak solution shape") {
    const auto sq = square_support(1024);
    CHECK(hausdorff_distance(weak_solution_shape(sq, 0.0), PlanarShape::rectangle(-1, -1, 1, 1)) < 1e-9);
    const auto frozen = weak_solution_shape(sq, 2.0, [](double) { return 0.0; });
    CHECK(hausdorff_distance(frozen, PlanarShape::rectangle(-1, -1, 1, 1)) < 1e-9);
    PlanarShape previous = weak_solution_shape(sq, 0.0);
    for (double t : {0.5, 1.0, 2.0, 3.0, 3.9}) {
        const PlanarShape now = weak_solution_shape(sq, t);
        CHECK(directed_hausdorff(now, previous) < 1e-9);
        previous = now;
    }
    CHECK(weak_solution_shape(sq, 4.2).empty());
    const auto fine = square_support(4096);
    for (double t : {0.5, 2.0, 3.0})
        CHECK(hausdorff_distance(weak_solution_shape(fine, t), square_limit_shape(t)) <= 1e-3);
}

TEST_CASE("clipped shapes") {
    for (double t : {1.0, 1.5, 2.5, 3.5}) {
        for (double delta : {0.01, 0.05, 0.1}) {
            if (t > 4 * (1 - delta) || inscribed_half_width(t) < delta) continue;
            CAPTURE(t);
            CAPTURE(delta);
            const ClippedShape c = clipped_shape(t, delta, 2048);
            CHECK(c.d == doctest::Approx(inscribed_half_width(t)));
            CHECK(c.r > c.d - delta / 2);
            CHECK(c.r < c.d);
            // Past the flattening point gbar has slope one, so the root is explicit.
            const double k = c.d - delta;
            CHECK(c.r == doctest::Approx((k - rost_profile_g(k, t) + 2.0) / 2.0).epsilon(1e-12));

            const PlanarShape full = square_limit_shape(t, 2048);
            CHECK(directed_hausdorff(c.shape, full) < 1e-6);  // arc sampling differs
            CHECK(hausdorff_distance(c.shape, full) <= delta * std::sqrt(2.0));
            const PlanarShape boxed = intersect_convex(full, PlanarShape::rectangle(-c.r, -c.r, c.r, c.r));
            CHECK(hausdorff_distance(c.shape, boxed) < 1e-5);
        }
    }
    CHECK(clipped_shape(1.0, 0.1).d == 1.0);
    CHECK_THROWS_AS(clipped_shape(0.5, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(clipped_shape(3.9, 0.1), std::invalid_argument);
}

TEST_CASE("curve shortening: circle collapse and area slope") {
    const double R = 1.0;
    const FlowResult r = evolve_flow(disk_support(256, R), 0.0, 10.0);
    REQUIRE(r.stop_time.has_value());
    CHECK(*r.stop_time == doctest::Approx(pi * R * R / 2).epsilon(0.02));
    for (std::size_t k = 1; k < r.history_areas.size(); ++k) CHECK(r.history_areas[k] < r.history_areas[k - 1]);
    CHECK(r.h.min_radius_of_curvature() > 0.0);

    const FlowResult half = evolve_flow(disk_support(256, R), 0.0, 0.75);
    CHECK_FALSE(half.stop_time.has_value());
    CHECK(half.time == 0.75);
    const double slope = isingdrop::stats::ols_slope(half.history_times, half.history_areas);
    CHECK(slope == doctest::Approx(-2.0).epsilon(0.01));

}

TEST_CASE("curve shortening is first order in the time step") {
    const auto h0 = SupportFunction::sample(64, [](double th) { return 1.0 + 0.2 * std::cos(2 * th); });
    auto run = [&](double dt) {
        FlowOptions o;
        o.dt = dt;
        return evolve_flow(h0, 0.0, 0.2, o).h.values();
    };
    const auto a = run(4e-4), b = run(2e-4), c = run(1e-4);
    const double ratio = max_abs_diff(a, b) / max_abs_diff(b, c);
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("drift speeds up shrinking") {
    const auto h0 = disk_support(256, 1.0);
    const double plain = evolve_flow(h0, 0.0, 0.3).h.enclosed_area();
    const double drifted = evolve_flow(h0, 1.0, 0.3).h.enclosed_area();
    CHECK(drifted < plain);
}

TEST_CASE("viscosity solution") {
    const Profile1D corner = Profile1D::sample(-3, 3, 601, [](double x) { return std::abs(x); });
    for (double t : {0.5, 1.0}) {
        const Profile1D u = viscosity_solution(corner, t);
        for (std::size_t j = 100; j <= 500; ++j) CHECK(std::abs(u.values[j] - rost_profile_g(u.x(j), t)) < 1e-12);
        CHECK(u.is_lipschitz());
    }
    const Profile1D flat = Profile1D::sample(-1, 1, 21, [](double) { return 0.7; });
    CHECK(viscosity_solution(flat, 0.3, 0.4) == doctest::Approx(0.9));

    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 3; ++trial) {
        const Profile1D u0 = random_lipschitz(rng, -4, 4, 8001);
        const Profile1D us = viscosity_solution(u0, 0.4);
        const Profile1D direct = viscosity_solution(u0, 0.7);
        double worst = 0.0;
        for (std::size_t j = 0; j < u0.size(); ++j) {
            const double x = u0.x(j);
            if (std::abs(x) > 2.5) continue;
            worst = std::max(worst, std::abs(viscosity_solution(us, x, 0.3) - direct.values[j]));
            CHECK(direct.values[j] >= us.values[j] - 1e-12);
        }
        CHECK(worst <= 1e-6);
        CHECK(direct.is_lipschitz());
        const double low = *std::min_element(u0.values.begin(), u0.values.end());
        for (double v : direct.values) CHECK(v >= low);
    }
}

TEST_CASE("heat solver") {
    const Profile1D mode = Profile1D::sample(-2, 2, 401, [](double x) { return std::cos(pi * x / 4); });
    for (double t : {0.1, 1.0, 3.0}) {
        const Profile1D v = heat_dirichlet(mode, t);
        double worst = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j)
            worst = std::max(worst, std::abs(v.values[j] - std::exp(-pi * pi * t / 32) * std::cos(pi * v.x(j) / 4)));
        CHECK(worst <= 1e-4);
    }
    const Profile1D zero = Profile1D::sample(-2, 2, 101, [](double) { return 0.0; });
    for (double v : heat_dirichlet(zero, 1.0).values) CHECK(v == 0.0);
    const Profile1D lifted = Profile1D::sample(-2, 2, 101, [](double) { return 1.0; });
    CHECK_THROWS_AS(heat_dirichlet(lifted, 1.0), std::invalid_argument);

    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 3; ++trial) {
        Profile1D v0 = random_lipschitz(rng, -2, 2, 401);
        const double end = v0.values.back();
        for (std::size_t j = 0; j < v0.size(); ++j) v0.values[j] -= end * double(j) / double(v0.size() - 1);
        const double t = 0.25;
        CHECK(max_abs_diff(heat_dirichlet(v0, t).values, heat_oracle(v0.values, v0.dx, t)) <= 1e-4);
    }
}

TEST_CASE("discrete heat mean matches the lattice equation and the SSEP interface") {
    std::vector<double> v0(41);
    for (int j = 0; j <= 40; ++j) v0[std::size_t(j)] = std::abs(j - 20) - 20;
    // Oracle: tiny explicit steps of the same lattice equation.
    std::vector<double> v = v0, next = v0;
    const double dt = 1e-3;
    for (int s = 0; s < 5000; ++s) {
        for (std::size_t j = 1; j < 40; ++j) next[j] = v[j] + 0.5 * dt * (v[j + 1] - 2 * v[j] + v[j - 1]);
        v.swap(next);
    }
    CHECK(max_abs_diff(discrete_heat_mean(v0, 5.0), v) < 2e-3);

    // Mean symmetric-exclusion interface, closed segment, from the same V profile.
    using namespace isingdrop::particles;
    HeightFunction eta{-20, {}};
    for (int j = 0; j <= 40; ++j) eta.values.push_back(std::abs(j - 20) - 20);
    const auto occ = sep_occupation_from_height(eta);
    std::vector<double> mean(41, 0.0);
    const int runs = 400;
    for (int s = 0; s < runs; ++s) {
        const auto tr = simulate_exclusion(occ, {0.0}, isingdrop::dynamics::ClockField(std::uint64_t(s), 0.0), 5.0, {});
        const auto h = height_from_occupation(tr.final_state);
        for (std::size_t j = 0; j < 41; ++j) mean[j] += double(h.values[j]) / runs;
    }
    CHECK(max_abs_diff(mean, discrete_heat_mean(v0, 5.0)) < 0.25);
}

TEST_CASE("WASEP equation") {
    const Profile1D slope = Profile1D::sample(-1, 1, 81, [](double x) { return x; });
    CHECK(max_abs_diff(wasep_pde(slope, 0.5).values, slope.values) < 1e-12);
    const Profile1D flat = Profile1D::sample(-1, 1, 81, [](double) { return 2.0; });
    for (double v : wasep_pde(flat, 0.6).values) CHECK(v == doctest::Approx(2.3));
    PdeOptions bad;
    bad.dt = 2 * flat.dx * flat.dx;
    CHECK_THROWS_AS(wasep_pde(flat, 0.1, bad), std::invalid_argument);

    // Grid refinement: differences shrink at least linearly.
    auto u0f = [](double x) { return 0.3 * std::sin(3 * x) + 0.2 * std::abs(x - 0.1); };
    std::vector<std::vector<double>> sols;
    for (std::size_t n : {41, 81, 161}) sols.push_back(wasep_pde(Profile1D::sample(-1, 1, n, u0f), 0.05).values);
    const double e1 = max_abs_diff(sols[0], sols[1], 2);
    const double e2 = max_abs_diff(sols[1], sols[2], 2);
    CHECK(e1 / e2 >= 1.8);
}

TEST_CASE("pole equation") {
    PdeOptions dir;
    dir.edges = EdgeRule::dirichlet;
    const Profile1D line = Profile1D::sample(-2, 2, 81, [](double x) { return 0.5 * x + 1; });
    CHECK(max_abs_diff(pole_pde(line, 0.4, dir).values, line.values) < 1e-12);

    const Profile1D even = Profile1D::sample(-2, 2, 81, [](double x) { return std::exp(-x * x) - std::exp(-4.0); });
    const Profile1D w = pole_pde(even, 0.3, dir);
    for (std::size_t j = 0; j < w.size(); ++j) CHECK(w.values[j] == doctest::Approx(w.values[w.size() - 1 - j]).epsilon(1e-12));

    const double eps = 0.05;
    const Profile1D small = Profile1D::sample(-2, 2, 201, [&](double x) { return eps * std::cos(pi * x / 4); });
    const double t = 0.5;
    const Profile1D ws = pole_pde(small, t, dir);
    const Profile1D heat = heat_dirichlet(small, 2 * t);  // w_xx versus v_xx / 2
    const double grad2 = std::pow(eps * pi / 4, 2);
    CHECK(max_abs_diff(ws.values, heat.values) / eps <= grad2);
    PdeOptions bad = dir;
    bad.dt = small.dx * small.dx;
    CHECK_THROWS_AS(pole_pde(small, 0.1, bad), std::invalid_argument);
}
