#include "isingdrop/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>

namespace isingdrop::dynamics {

using lattice::BoundaryRule;

int update_rule(std::span<const int, 4> neighbor_spins, const FieldParameter& params, int tie_mark,
                double uniform) {
    int sum = 0;
    for (int s : neighbor_spins) sum += s;
    if (params.zero_temperature()) {
        if (sum > 0) return 1;
        if (sum < 0) return -1;
        if (std::isinf(params.h)) return 1;
        return tie_mark;
    }
    if (std::isinf(params.h)) return 1;
    const double x = params.beta * sum + params.h;
    const double p_plus = 1.0 / (1.0 + std::exp(-2.0 * x));
    return uniform < p_plus ? 1 : -1;
}

namespace {

std::vector<double> sorted_samples(std::span<const double> sample_times, double horizon) {
    std::vector<double> s(sample_times.begin(), sample_times.end());
    std::sort(s.begin(), s.end());
    if (!s.empty() && s.front() < 0.0) throw std::invalid_argument("sample times must be >= 0");
    if (!s.empty() && s.back() > horizon) throw std::invalid_argument("horizon < max(sample_times)");
    return s;
}

// Shared bookkeeping of both engines: sampling, extinction, overflow.
class Recorder {
public:
    Recorder(const SpinConfiguration& config, const FieldParameter& params,
             std::span<const double> sample_times, double horizon, RunOptions options)
        : state(config),
          samples_(sorted_samples(sample_times, horizon)),
          minus_(config.minus_count()),
          h_infinite_(std::isinf(params.h)),
          watch_overflow_(config.boundary_rule() == BoundaryRule::frozen_mask),
          stop_(options.stop_at_extinction && config.boundary_rule() == BoundaryRule::all_plus) {
        traj.sampled_times = samples_;
        if (minus_ == 0) traj.extinction_time = 0.0;
    }

    /// Records every sample time strictly before t.
    void advance_to(double t) {
        while (next_ < samples_.size() && samples_[next_] < t) {
            traj.snapshots.push_back(state);
            ++next_;
        }
    }

    /// Applies a flip at time t. Returns true if the run should stop.
    bool flip(int col, int row, double t) {
        const bool was_minus = state.is_minus(col, row);
        state.flip(col, row);
        ++traj.event_count;
        if (was_minus) {
            --minus_;
        } else {
            ++minus_;
            if (h_infinite_) ++traj.monotonicity_violations;
        }
        if (watch_overflow_ && state.edge_distance(col, row) <= 2) {
            if (traj.overflow_events == 0) traj.first_overflow_time = t;
            ++traj.overflow_events;
        }
        if (minus_ == 0 && !traj.extinction_time) {
            traj.extinction_time = t;
            return stop_;
        }
        return false;
    }

    bool extinct() const { return minus_ == 0; }
    bool stops_at_extinction() const { return stop_; }

    Trajectory finish(double final_time) {
        advance_to(std::numeric_limits<double>::infinity());
        traj.final_time = final_time;
        traj.final_state = std::move(state);
        return std::move(traj);
    }

    SpinConfiguration state;
    Trajectory traj;

private:
    std::vector<double> samples_;
    std::size_t next_ = 0;
    std::size_t minus_;
    bool h_infinite_;
    bool watch_overflow_;
    bool stop_;
};

struct PendingRing {
    double time;
    double uniform;
    std::uint32_t site;
    int mark;
};

struct LaterRing {
    bool operator()(const PendingRing& a, const PendingRing& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.site > b.site;
    }
};

}  // namespace

Trajectory run_graphical(const SpinConfiguration& config, const ClockField& clocks,
                         const FieldParameter& params, double horizon,
                         std::span<const double> sample_times, RunOptions options) {
    params.validate();
    if (clocks.h() != params.h) throw std::invalid_argument("clock field built for a different h");
    Recorder rec(config, params, sample_times, horizon, options);
    const int W = config.half_width();
    auto key_of = [&](int col, int row) {
        return ClockField::site_key(2 * (col - W) + 1, 2 * (row - W) + 1);
    };

    std::vector<PendingRing> heap;
    heap.reserve(config.site_count());
    for (int r = 0; r < config.side(); ++r) {
        for (int c = 0; c < config.side(); ++c) {
            if (config.is_frozen(c, r)) continue;
            const Ring ring = clocks.next_ring_after(key_of(c, r), 0.0);
            heap.push_back({ring.time, ring.uniform, static_cast<std::uint32_t>(config.index(c, r)),
                            ring.tie_mark});
        }
    }
    std::priority_queue<PendingRing, std::vector<PendingRing>, LaterRing> queue(LaterRing{},
                                                                                std::move(heap));

    double final_time = horizon;
    if (rec.extinct() && rec.stops_at_extinction()) return rec.finish(0.0);
    while (!queue.empty()) {
        const PendingRing ring = queue.top();
        if (ring.time > horizon) break;
        queue.pop();
        rec.advance_to(ring.time);
        ++rec.traj.ring_count;

        const lattice::Site s = config.site_of(ring.site);
        const std::array<int, 4> nb{rec.state.spin(s.col - 1, s.row), rec.state.spin(s.col + 1, s.row),
                                    rec.state.spin(s.col, s.row - 1), rec.state.spin(s.col, s.row + 1)};
        const int next = update_rule(nb, params, ring.mark, ring.uniform);
        if (next != rec.state.spin(s.col, s.row) && rec.flip(s.col, s.row, ring.time)) {
            final_time = ring.time;
            break;
        }
        const Ring after = clocks.next_ring_after(key_of(s.col, s.row), ring.time);
        queue.push({after.time, after.uniform, ring.site, after.tie_mark});
    }
    return rec.finish(final_time);
}

namespace {

class KmcEngine {
public:
    KmcEngine(Recorder& rec, const FieldParameter& params) : state_(rec.state) {
        const double p_plus = params.plus_tie_probability();
        rate_ = {1.0, p_plus, 1.0 - p_plus};
        const std::size_t n = state_.site_count();
        slot_.assign(n, -1);
        cls_.assign(n, kNone);
        for (int r = 0; r < state_.side(); ++r)
            for (int c = 0; c < state_.side(); ++c) refresh(c, r);
    }

    double total_rate() const {
        double t = 0.0;
        for (int k = 0; k < 3; ++k) t += rate_[k] * static_cast<double>(members_[k].size());
        return t;
    }

    /// Picks the flipping site from two uniforms.
    std::size_t pick(double u_class, double u_member) const {
        double x = u_class * total_rate();
        int k = 0;
        for (; k < 2; ++k) {
            const double w = rate_[k] * static_cast<double>(members_[k].size());
            if (x < w && !members_[k].empty()) break;
            x -= w;
        }
        while (members_[k].empty()) --k;
        const auto& m = members_[k];
        const auto j = std::min(m.size() - 1, static_cast<std::size_t>(u_member * static_cast<double>(m.size())));
        return m[j];
    }

    void refresh_around(int c, int r) {
        refresh(c, r);
        refresh(c - 1, r);
        refresh(c + 1, r);
        refresh(c, r - 1);
        refresh(c, r + 1);
    }

private:
    static constexpr std::uint8_t kNone = 3;

    std::uint8_t class_of(int c, int r) const {
        if (state_.is_frozen(c, r)) return kNone;
        const int sum = state_.neighbor_sum(c, r);
        if (state_.is_minus(c, r)) {
            if (sum > 0) return 0;
            if (sum == 0 && rate_[1] > 0.0) return 1;
        } else {
            if (sum < 0) return 0;
            if (sum == 0 && rate_[2] > 0.0) return 2;
        }
        return kNone;
    }

    void refresh(int c, int r) {
        if (!state_.in_window(c, r)) return;
        const std::size_t i = state_.index(c, r);
        const std::uint8_t next = class_of(c, r);
        const std::uint8_t prev = cls_[i];
        if (next == prev) return;
        if (prev != kNone) {
            auto& m = members_[prev];
            const auto pos = static_cast<std::size_t>(slot_[i]);
            m[pos] = m.back();
            slot_[m[pos]] = static_cast<std::int32_t>(pos);
            m.pop_back();
        }
        if (next != kNone) {
            slot_[i] = static_cast<std::int32_t>(members_[next].size());
            members_[next].push_back(static_cast<std::uint32_t>(i));
        } else {
            slot_[i] = -1;
        }
        cls_[i] = next;
    }

    SpinConfiguration& state_;
    std::array<double, 3> rate_{};
    std::array<std::vector<std::uint32_t>, 3> members_;
    std::vector<std::int32_t> slot_;
    std::vector<std::uint8_t> cls_;
};

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

Trajectory run_kmc(const SpinConfiguration& config, const FieldParameter& params, double horizon,
                   std::uint64_t seed, std::span<const double> sample_times, RunOptions options) {
    params.validate();
    if (!params.zero_temperature()) throw std::invalid_argument("run_kmc requires beta = inf");
    Recorder rec(config, params, sample_times, horizon, options);
    if (rec.extinct() && rec.stops_at_extinction()) return rec.finish(0.0);

    KmcEngine engine(rec, params);
    std::mt19937_64 rng(ClockField::mix(seed));
    double t = 0.0;
    double final_time = horizon;
    while (true) {
        const double total = engine.total_rate();
        if (total <= 0.0) break;
        const double u = unit_uniform(rng);
        t += -std::log1p(-u) / total;
        if (t > horizon) break;
        rec.advance_to(t);
        const std::size_t i = engine.pick(unit_uniform(rng), unit_uniform(rng));
        const lattice::Site s = config.site_of(i);
        const bool stop = rec.flip(s.col, s.row, t);
        ++rec.traj.ring_count;
        if (stop) {
            final_time = t;
            break;
        }
        engine.refresh_around(s.col, s.row);
    }
    return rec.finish(final_time);
}

std::vector<Trajectory> coupled_run(std::span<const SpinConfiguration> configs,
                                    const ClockField& clocks, const FieldParameter& params,
                                    double horizon, std::span<const double> sample_times) {
    std::vector<Trajectory> out;
    out.reserve(configs.size());
    for (const SpinConfiguration& c : configs) {
        if (c.half_width() != configs.front().half_width())
            throw std::invalid_argument("coupled_run: configurations must share the window");
        out.push_back(run_graphical(c, clocks, params, horizon, sample_times));
    }
    return out;
}

ExtinctionResult extinction_time(const SpinConfiguration& config, const FieldParameter& params,
                                 std::uint64_t seed, double horizon) {
    if (config.boundary_rule() != BoundaryRule::all_plus)
        throw std::invalid_argument("extinction_time requires the all_plus boundary rule");
    const Trajectory traj = run_kmc(config, params, horizon, seed, {});
    ExtinctionResult r;
    r.event_count = traj.event_count;
    if (traj.extinction_time) {
        r.time = *traj.extinction_time;
    } else {
        r.time = traj.final_time;
        r.censored = true;
    }
    return r;
}

}  // namespace isingdrop::dynamics
