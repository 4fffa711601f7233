#include "isingdrop/clock.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace isingdrop::dynamics {

namespace {

constexpr std::uint64_t kLaneCount = 0;
constexpr std::uint64_t kLanePosition = 1;
constexpr std::uint64_t kLaneUniform = 2;
constexpr std::uint64_t kLaneAux = 3;

// Rings per bucket beyond this have probability < 1e-19.
constexpr int kMaxPerBucket = 20;

int poisson1_from_uniform(double u) {
    double p = std::exp(-1.0);
    double cdf = p;
    int k = 0;
    while (u >= cdf && k < kMaxPerBucket) {
        ++k;
        p /= k;
        cdf += p;
    }
    return k;
}

}  // namespace

ClockField::ClockField(std::uint64_t master_seed, double h) : seed_(master_seed), h_(h) {
    if (!(h >= 0.0)) throw std::invalid_argument("clock field: h must be >= 0");
    p_plus_ = std::isinf(h) ? 1.0 : 1.0 / (1.0 + std::exp(-2.0 * h));
}

std::uint64_t ClockField::mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t ClockField::site_key(std::int64_t x2, std::int64_t y2) {
    return mix(static_cast<std::uint64_t>(x2) * 0x100000001b3ULL) ^
           mix(static_cast<std::uint64_t>(y2) + 0x632be59bd9b4e019ULL);
}

std::uint64_t ClockField::line_key(std::int64_t x) {
    return mix(static_cast<std::uint64_t>(x) ^ 0xd1b54a32d192ed03ULL) ^ 0x8cb92ba72f3d8dd7ULL;
}

double ClockField::bucket_uniform(std::uint64_t key, std::int64_t bucket, std::uint64_t slot,
                                  std::uint64_t lane) const {
    std::uint64_t z = mix(seed_ ^ mix(key));
    z = mix(z ^ static_cast<std::uint64_t>(bucket) * 0xff51afd7ed558ccdULL);
    z = mix(z ^ (slot << 8) ^ lane);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

Ring ClockField::next_ring_after(std::uint64_t key, double t) const {
    std::int64_t bucket = t < 0.0 ? 0 : static_cast<std::int64_t>(std::floor(t));
    std::array<double, kMaxPerBucket> times{};
    for (;; ++bucket) {
        const int n = poisson1_from_uniform(bucket_uniform(key, bucket, 0, kLaneCount));
        if (n == 0) continue;
        for (int j = 0; j < n; ++j)
            times[static_cast<std::size_t>(j)] =
                static_cast<double>(bucket) +
                bucket_uniform(key, bucket, static_cast<std::uint64_t>(j), kLanePosition);
        std::sort(times.begin(), times.begin() + n);
        for (int j = 0; j < n; ++j) {
            const double tj = times[static_cast<std::size_t>(j)];
            if (tj > t) {
                Ring r;
                r.time = tj;
                r.uniform = bucket_uniform(key, bucket, static_cast<std::uint64_t>(j), kLaneUniform);
                r.aux = bucket_uniform(key, bucket, static_cast<std::uint64_t>(j), kLaneAux);
                r.tie_mark = r.uniform < p_plus_ ? 1 : -1;
                return r;
            }
        }
    }
}

}  // namespace isingdrop::dynamics
