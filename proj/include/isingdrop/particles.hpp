#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "isingdrop/clock.hpp"
#include "isingdrop/lattice.hpp"

namespace isingdrop::particles {

using dynamics::ClockField;
using lattice::FieldParameter;
using lattice::SpinConfiguration;

/// Integer path on [first, first + values.size() - 1] with unit increments.
struct HeightFunction {
    std::int64_t first = 0;
    std::vector<std::int64_t> values;

    std::int64_t last() const { return first + static_cast<std::int64_t>(values.size()) - 1; }
    std::int64_t at(std::int64_t x) const { return values[static_cast<std::size_t>(x - first)]; }
    /// Throws std::invalid_argument unless every increment is +-1.
    void validate() const;
    bool operator==(const HeightFunction&) const = default;
};

enum class SegmentEnds {
    closed,    // no particle enters or leaves
    step_pad,  // all occupied to the left, all empty to the right
};

/// xi(x) on [first, first + occupied.size() - 1]; `anchor` is the height at `first`.
struct OccupationField {
    std::int64_t first = 0;
    std::vector<std::uint8_t> occupied;
    std::int64_t anchor = 0;
    SegmentEnds ends = SegmentEnds::closed;

    std::size_t particle_count() const;
    bool operator==(const OccupationField&) const = default;
};

/// xi(x) = (eta(x) - eta(x+1) + 1) / 2 on [first, last - 1].
OccupationField sep_occupation_from_height(const HeightFunction& eta,
                                           SegmentEnds ends = SegmentEnds::closed);
HeightFunction height_from_occupation(const OccupationField& occ);

/// Step profile on [-half_length, half_length): particles left of 0, holes right,
/// eta(x) = |x|.
OccupationField step_occupation(std::int64_t half_length, SegmentEnds ends = SegmentEnds::step_pad);

/// Interface of a window whose minus set is closed under moving down or left.
/// Path corner (i, j) maps to x = j - i, eta = -(i + j); the result lives on
/// [-2W, 2W]. Throws std::invalid_argument for a non-monotone configuration.
HeightFunction height_from_config(const SpinConfiguration& config);
/// Inverse of height_from_config for the mixed_corner window of half width W.
SpinConfiguration config_from_height(const HeightFunction& eta, int half_width,
                                     lattice::BoundaryRule rule = lattice::BoundaryRule::mixed_corner);

struct ExclusionTrajectory {
    std::vector<double> sampled_times;
    std::vector<OccupationField> snapshots;
    OccupationField final_state;
    std::uint64_t right_jumps = 0;
    std::uint64_t left_jumps = 0;
    /// Jumps across a padded end: the finite segment stopped being exact.
    std::uint64_t boundary_events = 0;
};

/// Exclusion process at beta = inf: right jumps at rate e^h / (2 cosh h), left
/// at e^-h / (2 cosh h); right rate 1 and left rate 0 at h = inf. A jump is the
/// flip of the corner cell of the interface, read from the same clocks as
/// dynamics::run_graphical, so both pictures agree ring by ring.
ExclusionTrajectory simulate_exclusion(const OccupationField& occ, const FieldParameter& params,
                                       const ClockField& clocks, double horizon,
                                       std::span<const double> sample_times);

/// Piecewise-constant interface (column heights) of the pole dynamics.
struct StepProfile {
    std::int64_t first = 0;
    std::vector<std::int64_t> levels;
};

/// Signed pile sizes on the dual grid: entry k is the bond (first + k, first + k + 1).
/// Positive = species A, negative = species B.
struct ZeroRangeState {
    std::int64_t first = 0;
    std::vector<std::int64_t> signed_counts;

    std::int64_t count(std::size_t k) const {
        return signed_counts[k] < 0 ? -signed_counts[k] : signed_counts[k];
    }
    /// +1 for A, -1 for B, 0 for an empty site.
    int species(std::size_t k) const { return (signed_counts[k] > 0) - (signed_counts[k] < 0); }
    std::int64_t signed_mass() const;
    std::int64_t total_particles() const;
    bool operator==(const ZeroRangeState&) const = default;
};

/// n = |levels(x + 1) - levels(x)|, species by sign.
ZeroRangeState zrp_from_height(const StepProfile& eta);
/// Inverse up to the level at `first`.
StepProfile height_from_zrp(const ZeroRangeState& z, std::int64_t first_level = 0);

enum class ZeroRangeRates {
    per_particle,  // k particles at rate 1/(2k) each way: the pile moves at 1/2 each way
    per_site,      // the whole pile at rate 1/(2k) each way
};

struct ZeroRangeTrajectory {
    std::vector<double> sampled_times;
    std::vector<ZeroRangeState> snapshots;
    ZeroRangeState final_state;
    std::uint64_t jumps = 0;
    std::uint64_t annihilations = 0;
    std::uint64_t blocked = 0;
};

/// One particle leaves an occupied site per accepted ring, left or right with
/// equal odds; an A landing on B (or vice versa) removes one of each. The
/// segment is closed: jumps off either end are suppressed. Signed mass is
/// checked after every event (std::logic_error on violation).
ZeroRangeTrajectory simulate_zero_range(const ZeroRangeState& z, const ClockField& clocks,
                                        double horizon, std::span<const double> sample_times,
                                        ZeroRangeRates rates = ZeroRangeRates::per_particle);

}  // namespace isingdrop::particles
