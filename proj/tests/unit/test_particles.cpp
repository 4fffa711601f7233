#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "isingdrop/dynamics.hpp"
#include "isingdrop/particles.hpp"
#include "isingdrop/stats.hpp"

using namespace isingdrop::particles;
using isingdrop::dynamics::ClockField;
using isingdrop::lattice::BoundaryRule;
using isingdrop::lattice::kInfinity;

namespace {

HeightFunction path_from_bits(std::uint32_t bits, int steps, std::int64_t first, std::int64_t start) {
    HeightFunction eta{first, {start}};
    for (int k = 0; k < steps; ++k) eta.values.push_back(eta.values.back() + ((bits >> k & 1u) ? -1 : 1));
    return eta;
}

std::int64_t rightmost_particle(const OccupationField& occ) {
    for (std::size_t k = occ.occupied.size(); k-- > 0;)
        if (occ.occupied[k]) return occ.first + static_cast<std::int64_t>(k);
    return occ.first - 1;
}

}  // namespace

TEST_CASE("occupation of the corner and of a slope") {
    HeightFunction v{-4, {}};
    for (int x = -4; x <= 4; ++x) v.values.push_back(std::abs(x));
    const OccupationField occ = sep_occupation_from_height(v);
    for (int x = -4; x < 4; ++x) CHECK(occ.occupied[std::size_t(x + 4)] == (x < 0 ? 1 : 0));
    CHECK(occ == step_occupation(4, SegmentEnds::closed));

    HeightFunction up{0, {0, 1, 2, 3, 4}};
    for (auto o : sep_occupation_from_height(up).occupied) CHECK(o == 0);

    CHECK_THROWS_AS(sep_occupation_from_height(HeightFunction{0, {0, 2}}), std::invalid_argument);
}

TEST_CASE("height and occupation round trips are identities on all length-10 paths") {
    for (std::uint32_t bits = 0; bits < 1024; ++bits) {
        const HeightFunction eta = path_from_bits(bits, 10, -3, 7);
        const OccupationField occ = sep_occupation_from_height(eta);
        CHECK(occ.occupied.size() == 10);
        CHECK(height_from_occupation(occ) == eta);
        CHECK(sep_occupation_from_height(height_from_occupation(occ)) == occ);
    }
}

TEST_CASE("interfaces of mixed-corner windows are exactly the zero-ended paths") {
    int count = 0;
    for (std::uint32_t bits = 0; bits < 256; ++bits) {
        const HeightFunction eta = path_from_bits(bits, 8, -4, 0);
        if (eta.values.back() != 0) continue;
        ++count;
        const auto config = config_from_height(eta, 2);
        CHECK(isingdrop::lattice::is_increasing_set(config));
        CHECK(height_from_config(config) == eta);
    }
    CHECK(count == 70);

    isingdrop::lattice::SpinConfiguration bad(2, BoundaryRule::mixed_corner);
    bad.set_spin(3, 3, -1);
    CHECK_THROWS_AS(height_from_config(bad), std::invalid_argument);
}

TEST_CASE("exclusion and spin pictures agree ring by ring") {
    const int W = 10;  // a closed segment of 40 sites
    std::mt19937_64 rng(17);
    const std::vector<double> samples{0.5, 2, 5, 10, 20, 40};
    for (double h : {0.0, 1.0, kInfinity}) {
        const isingdrop::lattice::FieldParameter p{h};
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            // Random zero-ended path with 2W up and 2W down steps.
            std::vector<int> steps(4 * W);
            for (int k = 0; k < 4 * W; ++k) steps[std::size_t(k)] = k < 2 * W ? 1 : -1;
            std::shuffle(steps.begin(), steps.end(), rng);
            HeightFunction eta{-2 * W, {0}};
            for (int s : steps) eta.values.push_back(eta.values.back() + s);

            const ClockField clocks(seed, h);
            const auto config = config_from_height(eta, W);
            const auto spins = isingdrop::dynamics::run_graphical(config, clocks, p, 40.0, samples);
            const auto particles = simulate_exclusion(sep_occupation_from_height(eta), p, clocks, 40.0, samples);
            for (std::size_t k = 0; k < samples.size(); ++k) {
                const auto via_spins = sep_occupation_from_height(height_from_config(spins.snapshots[k]));
                CHECK(via_spins == particles.snapshots[k]);
            }
            CHECK(spins.event_count == particles.right_jumps + particles.left_jumps);
            CHECK(particles.final_state.particle_count() == std::size_t(2 * W));
        }
    }
}

TEST_CASE("single particle at zero field is a rate-one symmetric walk") {
    std::vector<double> disp;
    for (std::uint64_t seed = 0; seed < 3000; ++seed) {
        OccupationField occ{-200, std::vector<std::uint8_t>(400, 0), 0, SegmentEnds::closed};
        occ.occupied[200] = 1;  // particle at 0
        const auto t = simulate_exclusion(occ, {0.0}, ClockField(seed, 0.0), 100.0, {});
        disp.push_back(double(rightmost_particle(t.final_state)));
    }
    const double m = isingdrop::stats::mean(disp);
    const double sd = isingdrop::stats::stddev(disp);
    CHECK(std::abs(m) <= 3.0 * sd / std::sqrt(3000.0));
    CHECK(sd * sd == doctest::Approx(100.0).epsilon(0.08));
}

TEST_CASE("step profile at infinite field: the front particle is Poisson(t)") {
    std::vector<double> pos;
    for (std::uint64_t seed = 0; seed < 3000; ++seed) {
        const auto t = simulate_exclusion(step_occupation(60), {kInfinity}, ClockField(seed, kInfinity), 20.0, {});
        pos.push_back(double(rightmost_particle(t.final_state) + 1));
        CHECK(t.left_jumps == 0);
        CHECK(t.boundary_events == 0);
    }
    CHECK(isingdrop::stats::mean(pos) == doctest::Approx(20.0).epsilon(0.02));
    const double sd = isingdrop::stats::stddev(pos);
    CHECK(sd * sd == doctest::Approx(20.0).epsilon(0.1));
}

TEST_CASE("closed segments conserve particles") {
    std::mt19937_64 rng(2);
    OccupationField occ{0, std::vector<std::uint8_t>(50, 0), 3, SegmentEnds::closed};
    for (auto& o : occ.occupied) o = rng() % 2;
    const std::vector<double> samples{1, 10, 100};
    const auto t = simulate_exclusion(occ, {0.4}, ClockField(1, 0.4), 100.0, samples);
    for (const auto& s : t.snapshots) CHECK(s.particle_count() == occ.particle_count());
    CHECK(t.right_jumps > t.left_jumps);
}

TEST_CASE("asymmetric corner growth is slowed by tanh(h)") {
    auto corner_gain = [](double h) {
        std::vector<double> gain;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto t = simulate_exclusion(step_occupation(400), {h}, ClockField(seed, h), 300.0, {});
            gain.push_back(double(height_from_occupation(t.final_state).at(0)));
        }
        return isingdrop::stats::mean(gain);
    };
    const double ratio = corner_gain(1.0) / corner_gain(kInfinity);
    CHECK(ratio == doctest::Approx(std::tanh(1.0)).epsilon(0.1));
}

TEST_CASE("zero-range state from a pole interface") {
    StepProfile flat{0, {3, 3, 3, 3}};
    for (auto v : zrp_from_height(flat).signed_counts) CHECK(v == 0);

    StepProfile up{-2, {0, 0, 1, 1, 1}};
    const ZeroRangeState z = zrp_from_height(up);
    CHECK(z.total_particles() == 1);
    CHECK(z.species(1) == 1);  // the bond (-1, 0)
    CHECK(z.count(1) == 1);

    // Flat stretches separate the A run from the B run; the direct scan is the oracle.
    StepProfile mixed{0, {0, 2, 3, 3, 1, 0, 0, 4}};
    const ZeroRangeState m = zrp_from_height(mixed);
    const std::vector<std::int64_t> want{2, 1, 0, -2, -1, 0, 4};
    CHECK(m.signed_counts == want);
    CHECK(m.signed_mass() == 4);
    CHECK(height_from_zrp(m, 0).levels == mixed.levels);
}

TEST_CASE("zero-range: lone particle walks, opposite particles annihilate") {
    std::vector<double> disp;
    for (std::uint64_t seed = 0; seed < 3000; ++seed) {
        ZeroRangeState z{-300, std::vector<std::int64_t>(601, 0)};
        z.signed_counts[300] = 1;
        const auto t = simulate_zero_range(z, ClockField(seed, 0.0), 50.0, {});
        for (std::size_t k = 0; k < 601; ++k)
            if (t.final_state.signed_counts[k]) disp.push_back(double(k) - 300.0);
    }
    REQUIRE(disp.size() == 3000);
    const double sd = isingdrop::stats::stddev(disp);
    CHECK(sd * sd == doctest::Approx(50.0).epsilon(0.08));

    int annihilated = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const ZeroRangeState pair{0, {0, 1, -1, 0}};
        const auto t = simulate_zero_range(pair, ClockField(seed, 0.0), 1000.0, {});
        CHECK(t.final_state.signed_mass() == 0);
        annihilated += t.final_state.total_particles() == 0;
    }
    CHECK(annihilated == 200);
}

TEST_CASE("zero-range conserves signed mass over many events") {
    std::mt19937_64 rng(4);
    ZeroRangeState z{0, std::vector<std::int64_t>(60)};
    for (auto& v : z.signed_counts) v = std::int64_t(rng() % 7) - 3;
    const std::vector<double> samples{10, 100, 1000};
    const auto t = simulate_zero_range(z, ClockField(4, 0.0), 1000.0, samples);
    CHECK(t.jumps > 10000);
    for (const auto& s : t.snapshots) CHECK(s.signed_mass() == z.signed_mass());
    CHECK(t.annihilations > 0);

    // The per-site reading slows large piles down.
    ZeroRangeState pile{0, std::vector<std::int64_t>(21, 0)};
    pile.signed_counts[10] = 8;
    const auto fast = simulate_zero_range(pile, ClockField(6, 0.0), 5.0, {}, ZeroRangeRates::per_particle);
    const auto slow = simulate_zero_range(pile, ClockField(6, 0.0), 5.0, {}, ZeroRangeRates::per_site);
    CHECK(slow.jumps < fast.jumps);
}
