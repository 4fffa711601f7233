#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "isingdrop/clock.hpp"
#include "isingdrop/lattice.hpp"

namespace isingdrop::dynamics {

using lattice::FieldParameter;
using lattice::SpinConfiguration;

/// Heat-bath update of one spin given its four neighbors.
/// beta = inf: strict majority, else tie_mark (always +1 at h = inf).
/// beta finite: +1 iff uniform < e^{beta S + h} / (2 cosh(beta S + h)).
int update_rule(std::span<const int, 4> neighbor_spins, const FieldParameter& params, int tie_mark,
                double uniform);

struct Trajectory {
    std::vector<double> sampled_times;
    std::vector<SpinConfiguration> snapshots;
    /// Spin flips performed.
    std::uint64_t event_count = 0;
    /// Clock rings processed (graphical engine; equals event_count for KMC).
    std::uint64_t ring_count = 0;
    std::optional<double> extinction_time;
    /// Time at which the run stopped (horizon or extinction).
    double final_time = 0.0;
    SpinConfiguration final_state;

    /// Flips of non-frozen sites within two cells of the window edge under the
    /// frozen_mask rule: the window was too small for an infinite-volume run.
    std::uint64_t overflow_events = 0;
    std::optional<double> first_overflow_time;
    /// Minus-to-plus only at h = inf; counts flips that broke it.
    std::uint64_t monotonicity_violations = 0;
};

struct RunOptions {
    /// Stop once the droplet is empty under the all_plus rule (absorbing).
    bool stop_at_extinction = true;
};

/// Exact graphical construction: every ring of every window site, in global
/// time order, up to `horizon`. Deterministic in (config, clocks, params).
Trajectory run_graphical(const SpinConfiguration& config, const ClockField& clocks,
                         const FieldParameter& params, double horizon,
                         std::span<const double> sample_times, RunOptions options = {});

/// Rejection-free kinetic Monte Carlo of the same chain (beta = inf only).
Trajectory run_kmc(const SpinConfiguration& config, const FieldParameter& params, double horizon,
                   std::uint64_t seed, std::span<const double> sample_times,
                   RunOptions options = {});

/// Every config driven by the same clocks and tie marks.
std::vector<Trajectory> coupled_run(std::span<const SpinConfiguration> configs,
                                    const ClockField& clocks, const FieldParameter& params,
                                    double horizon, std::span<const double> sample_times);

struct ExtinctionResult {
    double time = 0.0;
    bool censored = false;
    std::uint64_t event_count = 0;
};

/// First time the droplet is empty (KMC engine, all_plus boundary only).
/// Censored if `horizon` is reached first.
ExtinctionResult extinction_time(const SpinConfiguration& config, const FieldParameter& params,
                                 std::uint64_t seed, double horizon = 1e15);

}  // namespace isingdrop::dynamics
