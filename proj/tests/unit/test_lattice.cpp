#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <sstream>

#include "isingdrop/lattice.hpp"

using namespace isingdrop::lattice;
using isingdrop::geometry::PlanarShape;
using isingdrop::geometry::Point;

TEST_CASE("field parameter validation") {
    CHECK_NOTHROW(FieldParameter{}.validate());
    CHECK_THROWS_AS((FieldParameter{-0.1, kInfinity}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((FieldParameter{0.0, 0.0}.validate()), std::invalid_argument);
    CHECK(FieldParameter{0.0}.plus_tie_probability() == doctest::Approx(0.5));
    CHECK(FieldParameter{kInfinity}.plus_tie_probability() == 1.0);
    CHECK(FieldParameter{1.0}.plus_tie_probability() == doctest::Approx(std::exp(1.0) / (2 * std::cosh(1.0))));
}

TEST_CASE("init_from_shape examples") {
    const auto full = init_from_shape(PlanarShape::rectangle(-1, -1, 1, 1), 4, BoundaryRule::all_plus);
    CHECK(full.minus_count() == 64);
    CHECK(area_of(droplet_of(full).shape) == doctest::Approx(64.0));

    const auto none = init_from_shape(PlanarShape{}, 8, BoundaryRule::all_plus);
    CHECK(none.minus_count() == 0);
    CHECK(droplet_of(none).empty());
    CHECK(droplet_of(none).shape.empty());

    // Lattice-point count oracle: centers (i + 1/2, j + 1/2) with |.| <= 50.
    const int L = 100;
    const auto disk = init_from_shape(PlanarShape::disk({0, 0}, 0.5, 8192), L, BoundaryRule::all_plus);
    std::size_t expected = 0;
    for (int i = -L; i < L; ++i)
        for (int j = -L; j < L; ++j)
            if (std::hypot(i + 0.5, j + 0.5) <= 50.0) ++expected;
    CHECK(std::abs(double(disk.minus_count()) - double(expected)) <= 0.002 * double(expected));
    CHECK(double(disk.minus_count()) / (L * L) == doctest::Approx(std::numbers::pi / 4).epsilon(0.02));

    CHECK_THROWS_AS(init_from_shape(PlanarShape::rectangle(-1, -1, 1.5, 1), 4, BoundaryRule::all_plus),
                    std::invalid_argument);
}

TEST_CASE("window half width larger than L") {
    const auto c = init_from_shape(PlanarShape::rectangle(-1, -1, 1, 1), 4, BoundaryRule::all_plus, 6);
    CHECK(c.half_width() == 6);
    CHECK(c.minus_count() == 64);
    CHECK_FALSE(c.is_minus(0, 0));
    CHECK(c.is_minus(2, 2));
}

TEST_CASE("droplet of a single minus site") {
    SpinConfiguration c(3, BoundaryRule::all_plus);
    c.set_spin(3, 3, -1);  // center (1/2, 1/2)
    CHECK(c.center(3, 3).x == 0.5);
    const DropletSet d = droplet_of(c);
    REQUIRE(d.minus_sites.size() == 1);
    CHECK(area_of(d.shape) == doctest::Approx(1.0));
    const auto b = d.shape.bounds();
    CHECK(b.xmin == 0.0);
    CHECK(b.ymax == 1.0);
    CHECK(d.rescaled(3.0).bounds().xmax == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("droplet shape handles holes and diagonal contacts") {
    SpinConfiguration ring(3, BoundaryRule::all_plus);
    for (int r = 1; r <= 3; ++r)
        for (int c = 1; c <= 3; ++c)
            if (!(r == 2 && c == 2)) ring.set_spin(c, r, -1);
    CHECK(area_of(droplet_shape(ring)) == doctest::Approx(8.0));
    CHECK(droplet_shape(ring).rings().size() == 2);

    SpinConfiguration diag(2, BoundaryRule::all_plus);
    diag.set_spin(1, 1, -1);
    diag.set_spin(2, 2, -1);
    const auto s = droplet_shape(diag);
    CHECK(s.rings().size() == 2);
    CHECK(area_of(s) == doctest::Approx(2.0));
}

TEST_CASE("init then droplet is within one cell of the scaled shape") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Point> pts(8);
        for (auto& p : pts) p = {u(rng), u(rng)};
        const PlanarShape shape = PlanarShape::polygon(isingdrop::geometry::convex_hull(pts));
        const int L = 40;
        const auto config = init_from_shape(shape, L, BoundaryRule::all_plus);
        const auto d = droplet_of(config);
        if (d.empty()) continue;
        // Every minus cell lies within half a diagonal of its center, which is in L * shape.
        CHECK(directed_hausdorff(d.shape, shape.scaled(L), 1e-3) <= std::sqrt(2.0) / 2 + 1e-9);
    }
}

TEST_CASE("init then droplet is within one cell of fat shapes, both ways") {
    // The reverse direction needs room for a lattice center near every point:
    // thin slivers of a convex shape can hold none (see the notes).
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.4, 0.4), rad(0.2, 0.5);
    const int L = 40;
    for (int trial = 0; trial < 20; ++trial) {
        const PlanarShape disk = PlanarShape::disk({u(rng), u(rng)}, rad(rng), 2048);
        const auto d = droplet_of(init_from_shape(disk, L, BoundaryRule::all_plus));
        CHECK(hausdorff_distance(d.shape, disk.scaled(L), 1e-3) <= std::sqrt(2.0) / 2 + 1e-9);
        const double x0 = u(rng), y0 = u(rng);
        const PlanarShape rect = PlanarShape::rectangle(x0, y0, x0 + rad(rng), y0 + rad(rng));
        const auto e = droplet_of(init_from_shape(rect, L, BoundaryRule::all_plus));
        CHECK(hausdorff_distance(e.shape, rect.scaled(L), 1e-3) <= std::sqrt(2.0) / 2 + 1e-9);
    }
}

TEST_CASE("is_increasing_set examples") {
    const auto quadrant = init_from_predicate(4, BoundaryRule::all_plus, [](Point p) { return !(p.x > 0 && p.y > 0); });
    CHECK(is_increasing_set(quadrant));

    SpinConfiguration hole(4, BoundaryRule::all_plus);
    hole.set_spin(3, 4, -1);
    CHECK_FALSE(is_increasing_set(hole));

    // Corner interface: minus exactly on the lower-left quadrant, read as eta(x) = |x|.
    const auto corner = init_from_predicate(6, BoundaryRule::mixed_corner, [](Point p) { return p.x < 0 && p.y < 0; });
    CHECK(is_increasing_set(corner));
}

TEST_CASE("tie flips preserve increasing sets (exhaustive 4x4 window)") {
    std::size_t increasing = 0;
    for (std::uint32_t bits = 0; bits < (1u << 16); ++bits) {
        SpinConfiguration c(2, BoundaryRule::mixed_corner);
        for (int k = 0; k < 16; ++k)
            if (bits >> k & 1u) c.set_spin(k % 4, k / 4, -1);
        if (!is_increasing_set(c)) continue;
        ++increasing;
        for (int k = 0; k < 16; ++k) {
            const int col = k % 4, row = k / 4;
            if (c.neighbor_sum(col, row) != 0) continue;
            SpinConfiguration f = c;
            f.flip(col, row);
            CHECK(is_increasing_set(f));
        }
    }
    CHECK(increasing == 70);  // monotone staircases in a 4x4 box: C(8,4)
}

TEST_CASE("boundary rules") {
    SpinConfiguration mixed(2, BoundaryRule::mixed_corner);
    CHECK(mixed.is_minus(-1, 0));
    CHECK(mixed.is_minus(0, -1));
    CHECK(mixed.is_minus(5, -1));
    CHECK_FALSE(mixed.is_minus(4, 0));
    CHECK_FALSE(mixed.is_minus(0, 4));
    CHECK_FALSE(mixed.is_minus(-1, 4));

    SpinConfiguration plus(2, BoundaryRule::all_plus);
    CHECK_THROWS_AS(plus.set_frozen(0, 0, true), std::logic_error);
    SpinConfiguration frozen(3, BoundaryRule::frozen_mask);
    frozen.freeze_border(1);
    CHECK(frozen.is_frozen(0, 3));
    CHECK(frozen.is_frozen(5, 5));
    CHECK_FALSE(frozen.is_frozen(1, 1));
    CHECK(frozen.edge_distance(1, 4) == 1);
}

TEST_CASE("dominance order") {
    SpinConfiguration a(2, BoundaryRule::all_plus), b(2, BoundaryRule::all_plus);
    b.set_spin(1, 1, -1);
    CHECK(a.dominates(b));
    CHECK_FALSE(b.dominates(a));
    CHECK(a.dominates(a));
}

TEST_CASE("rle json and pbm exports") {
    SpinConfiguration c(2, BoundaryRule::all_plus);
    c.set_spin(0, 0, -1);
    c.set_spin(1, 0, -1);
    c.set_spin(3, 2, -1);
    std::stringstream js;
    write_rle_json(js, c);
    CHECK(js.str() == "{\"half_width\":2,\"rows\":[[0,2],[],[3,1],[]]}\n");
    CHECK(read_rle_json(js) == c);

    std::stringstream pbm;
    write_pbm(pbm, c);
    CHECK(pbm.str() == "P1\n4 4\n0000\n0001\n0000\n1100\n");
}
