#pragma once

#include <cstdint>

namespace isingdrop::dynamics {

/// One ring of a site's Poisson clock.
struct Ring {
    double time = 0.0;
    /// Uniform in [0,1) attached to the ring; drives finite-beta updates.
    double uniform = 0.0;
    /// Second independent uniform (zero-range thinning and similar).
    double aux = 0.0;
    /// +1 with probability e^h / (2 cosh h), else -1. Equals (uniform < p_plus).
    int tie_mark = 1;
};

/// Deterministic randomness of the graphical construction. Every site owns a
/// rate-one Poisson clock whose realization depends only on (seed, key):
/// time is cut into unit buckets, each bucket holds a Poisson(1) number of
/// uniformly placed rings, all drawn by counter-based hashing. This gives
/// O(1) "next ring after t" lookups with no stored tapes, so coupled runs
/// and lazily-started particle views read identical clocks.
class ClockField {
public:
    ClockField(std::uint64_t master_seed, double h);

    std::uint64_t master_seed() const { return seed_; }
    double h() const { return h_; }
    double plus_probability() const { return p_plus_; }

    /// First ring strictly after time t.
    Ring next_ring_after(std::uint64_t key, double t) const;

    /// Key of the site centered at (x2/2, y2/2); doubled coordinates keep
    /// (Z+1/2)^2 sites integral and independent of the window.
    static std::uint64_t site_key(std::int64_t x2, std::int64_t y2);
    /// Key of a site of a one-dimensional lattice (disjoint from site keys).
    static std::uint64_t line_key(std::int64_t x);

    /// Stateless 64-bit mixer used for every draw.
    static std::uint64_t mix(std::uint64_t z);

private:
    double bucket_uniform(std::uint64_t key, std::int64_t bucket, std::uint64_t slot,
                          std::uint64_t lane) const;

    std::uint64_t seed_;
    double h_;
    double p_plus_;
};

}  // namespace isingdrop::dynamics
