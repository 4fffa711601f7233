#include "isingdrop/particles.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace isingdrop::particles {

void HeightFunction::validate() const {
    if (values.empty()) throw std::invalid_argument("height function: empty domain");
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
        const std::int64_t d = values[k + 1] - values[k];
        if (d != 1 && d != -1) throw std::invalid_argument("height function: increments must be +-1");
    }
}

std::size_t OccupationField::particle_count() const {
    return static_cast<std::size_t>(std::count(occupied.begin(), occupied.end(), std::uint8_t{1}));
}

OccupationField sep_occupation_from_height(const HeightFunction& eta, SegmentEnds ends) {
    eta.validate();
    OccupationField occ;
    occ.first = eta.first;
    occ.anchor = eta.values.front();
    occ.ends = ends;
    occ.occupied.resize(eta.values.size() - 1);
    for (std::size_t k = 0; k + 1 < eta.values.size(); ++k)
        occ.occupied[k] = static_cast<std::uint8_t>((eta.values[k] - eta.values[k + 1] + 1) / 2);
    return occ;
}

HeightFunction height_from_occupation(const OccupationField& occ) {
    HeightFunction eta;
    eta.first = occ.first;
    eta.values.resize(occ.occupied.size() + 1);
    eta.values[0] = occ.anchor;
    for (std::size_t k = 0; k < occ.occupied.size(); ++k) {
        if (occ.occupied[k] > 1) throw std::invalid_argument("occupation values must be 0 or 1");
        eta.values[k + 1] = eta.values[k] - (2 * static_cast<std::int64_t>(occ.occupied[k]) - 1);
    }
    return eta;
}

OccupationField step_occupation(std::int64_t half_length, SegmentEnds ends) {
    if (half_length < 1) throw std::invalid_argument("step profile: half length must be >= 1");
    OccupationField occ;
    occ.first = -half_length;
    occ.anchor = half_length;
    occ.ends = ends;
    occ.occupied.assign(static_cast<std::size_t>(2 * half_length), 0);
    std::fill(occ.occupied.begin(), occ.occupied.begin() + half_length, std::uint8_t{1});
    return occ;
}

HeightFunction height_from_config(const SpinConfiguration& config) {
    const int W = config.half_width();
    const int side = config.side();
    std::vector<int> column(static_cast<std::size_t>(side));
    for (int c = 0; c < side; ++c) {
        int m = 0;
        while (m < side && config.is_minus(c, m)) ++m;
        for (int r = m; r < side; ++r)
            if (config.is_minus(c, r)) throw std::invalid_argument("height_from_config: column not contiguous");
        if (c > 0 && m > column[static_cast<std::size_t>(c - 1)])
            throw std::invalid_argument("height_from_config: minus set is not monotone");
        column[static_cast<std::size_t>(c)] = m;
    }

    // Walk from (W, -W) to (-W, W), one unit step per x.
    HeightFunction eta;
    eta.first = -2 * static_cast<std::int64_t>(W);
    eta.values.reserve(static_cast<std::size_t>(4 * W + 1));
    std::int64_t i = W;
    std::int64_t j = -W;
    eta.values.push_back(-(i + j));
    auto step_up = [&](std::int64_t target) {
        while (j < target) {
            ++j;
            eta.values.push_back(-(i + j));
        }
    };
    for (int c = side - 1; c >= 0; --c) {
        step_up(-W + column[static_cast<std::size_t>(c)]);
        --i;
        eta.values.push_back(-(i + j));
    }
    step_up(W);
    return eta;
}

SpinConfiguration config_from_height(const HeightFunction& eta, int half_width,
                                     lattice::BoundaryRule rule) {
    eta.validate();
    const std::int64_t W = half_width;
    if (eta.first != -2 * W || eta.last() != 2 * W || eta.values.front() != 0 || eta.values.back() != 0)
        throw std::invalid_argument("config_from_height: eta must run over [-2W, 2W] with zero ends");
    SpinConfiguration config(half_width, rule);
    std::int64_t i = W;
    std::int64_t j = -W;
    for (std::size_t k = 0; k + 1 < eta.values.size(); ++k) {
        if (eta.values[k + 1] > eta.values[k]) {
            // Left step along the top of the column with cells i - 1 .. i.
            const int col = static_cast<int>(i - 1 + W);
            for (int row = 0; row < static_cast<int>(j + W); ++row) config.set_spin(col, row, -1);
            --i;
        } else {
            ++j;
        }
        if (i < -W || j > W) throw std::invalid_argument("config_from_height: path leaves the window");
    }
    return config;
}

namespace {

struct Scheduled {
    double time;
    std::uint32_t point;
    std::uint32_t version;
    int mark;
    double uniform = 0.0;
    double aux = 0.0;
};

struct LaterFirst {
    bool operator()(const Scheduled& a, const Scheduled& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.point > b.point;
    }
};

using EventQueue = std::priority_queue<Scheduled, std::vector<Scheduled>, LaterFirst>;

std::vector<double> sorted_samples(std::span<const double> sample_times, double horizon) {
    std::vector<double> s(sample_times.begin(), sample_times.end());
    std::sort(s.begin(), s.end());
    if (!s.empty() && (s.front() < 0.0 || s.back() > horizon))
        throw std::invalid_argument("sample times must lie in [0, horizon]");
    return s;
}

class Interface {
public:
    explicit Interface(const OccupationField& occ)
        : first_(occ.first), eta_(height_from_occupation(occ).values), ends_(occ.ends) {
        if (occ.occupied.empty()) throw std::invalid_argument("exclusion: empty segment");
    }

    std::size_t points() const { return eta_.size(); }

    /// +1 local minimum, -1 local maximum, 0 otherwise.
    int corner(std::size_t p) const {
        const std::size_t n = eta_.size() - 1;
        const bool pad = ends_ == SegmentEnds::step_pad;
        if ((p == 0 || p == n) && !pad) return 0;
        const std::int64_t left = p == 0 ? eta_[0] + 1 : eta_[p - 1];
        const std::int64_t right = p == n ? eta_[n] + 1 : eta_[p + 1];
        if (left > eta_[p] && right > eta_[p]) return 1;
        if (left < eta_[p] && right < eta_[p]) return -1;
        return 0;
    }

    /// Clock key of the cell sitting in the corner at p.
    std::uint64_t cell_key(std::size_t p, int kind) const {
        const std::int64_t x = first_ + static_cast<std::int64_t>(p);
        const std::int64_t e = eta_[p];
        return ClockField::site_key(-e - x - kind, x - e - kind);
    }

    void shift(std::size_t p, std::int64_t by) { eta_[p] += by; }
    bool at_end(std::size_t p) const { return p == 0 || p + 1 == eta_.size(); }

    OccupationField occupation() const {
        OccupationField occ;
        occ.first = first_;
        occ.anchor = eta_.front();
        occ.ends = ends_;
        occ.occupied.resize(eta_.size() - 1);
        for (std::size_t k = 0; k + 1 < eta_.size(); ++k)
            occ.occupied[k] = static_cast<std::uint8_t>((eta_[k] - eta_[k + 1] + 1) / 2);
        return occ;
    }

private:
    std::int64_t first_;
    std::vector<std::int64_t> eta_;
    SegmentEnds ends_;
};

}  // namespace

ExclusionTrajectory simulate_exclusion(const OccupationField& occ, const FieldParameter& params,
                                       const ClockField& clocks, double horizon,
                                       std::span<const double> sample_times) {
    params.validate();
    if (!params.zero_temperature()) throw std::invalid_argument("exclusion view needs beta = inf");
    if (clocks.h() != params.h) throw std::invalid_argument("clock field built for a different h");

    Interface iface(occ);
    ExclusionTrajectory traj;
    traj.sampled_times = sorted_samples(sample_times, horizon);
    std::size_t next_sample = 0;

    std::vector<std::uint32_t> version(iface.points(), 0);
    EventQueue queue;
    auto schedule = [&](std::size_t p, double after) {
        ++version[p];
        const int kind = iface.corner(p);
        if (kind == 0) return;
        const dynamics::Ring ring = clocks.next_ring_after(iface.cell_key(p, kind), after);
        queue.push({ring.time, static_cast<std::uint32_t>(p), version[p], ring.tie_mark});
    };
    for (std::size_t p = 0; p < iface.points(); ++p) schedule(p, 0.0);

    while (!queue.empty()) {
        const Scheduled ev = queue.top();
        if (ev.time > horizon) break;
        queue.pop();
        if (ev.version != version[ev.point]) continue;
        while (next_sample < traj.sampled_times.size() && traj.sampled_times[next_sample] < ev.time) {
            traj.snapshots.push_back(iface.occupation());
            ++next_sample;
        }
        const std::size_t p = ev.point;
        const int kind = iface.corner(p);
        // A minimum is a minus cell in a 2-2 tie: it turns + on a + mark.
        const bool jump = (kind == 1 && ev.mark == 1) || (kind == -1 && ev.mark == -1);
        if (jump) {
            iface.shift(p, 2 * kind);
            (kind == 1 ? traj.right_jumps : traj.left_jumps) += 1;
            if (iface.at_end(p)) ++traj.boundary_events;
            if (p > 0) schedule(p - 1, ev.time);
            if (p + 1 < iface.points()) schedule(p + 1, ev.time);
        }
        schedule(p, ev.time);
    }
    while (next_sample < traj.sampled_times.size()) {
        traj.snapshots.push_back(iface.occupation());
        ++next_sample;
    }
    traj.final_state = iface.occupation();
    return traj;
}

std::int64_t ZeroRangeState::signed_mass() const {
    std::int64_t m = 0;
    for (std::int64_t v : signed_counts) m += v;
    return m;
}

std::int64_t ZeroRangeState::total_particles() const {
    std::int64_t m = 0;
    for (std::int64_t v : signed_counts) m += v < 0 ? -v : v;
    return m;
}

ZeroRangeState zrp_from_height(const StepProfile& eta) {
    if (eta.levels.empty()) throw std::invalid_argument("zrp_from_height: empty profile");
    ZeroRangeState z;
    z.first = eta.first;
    z.signed_counts.resize(eta.levels.size() - 1);
    for (std::size_t k = 0; k + 1 < eta.levels.size(); ++k)
        z.signed_counts[k] = eta.levels[k + 1] - eta.levels[k];
    return z;
}

StepProfile height_from_zrp(const ZeroRangeState& z, std::int64_t first_level) {
    StepProfile eta;
    eta.first = z.first;
    eta.levels.resize(z.signed_counts.size() + 1);
    eta.levels[0] = first_level;
    for (std::size_t k = 0; k < z.signed_counts.size(); ++k)
        eta.levels[k + 1] = eta.levels[k] + z.signed_counts[k];
    return eta;
}

ZeroRangeTrajectory simulate_zero_range(const ZeroRangeState& z, const ClockField& clocks,
                                        double horizon, std::span<const double> sample_times,
                                        ZeroRangeRates rates) {
    ZeroRangeTrajectory traj;
    traj.sampled_times = sorted_samples(sample_times, horizon);
    std::size_t next_sample = 0;
    ZeroRangeState state = z;
    const std::int64_t initial_mass = state.signed_mass();
    std::int64_t mass = initial_mass;
    const std::size_t n = state.signed_counts.size();

    std::vector<std::uint32_t> version(n, 0);
    EventQueue queue;
    auto key = [&](std::size_t k) { return ClockField::line_key(state.first + static_cast<std::int64_t>(k)); };
    auto schedule = [&](std::size_t k, double after) {
        ++version[k];
        if (state.signed_counts[k] == 0) return;
        const dynamics::Ring ring = clocks.next_ring_after(key(k), after);
        queue.push({ring.time, static_cast<std::uint32_t>(k), version[k], 0, ring.uniform, ring.aux});
    };
    for (std::size_t k = 0; k < n; ++k) schedule(k, 0.0);

    while (!queue.empty()) {
        const Scheduled ev = queue.top();
        if (ev.time > horizon) break;
        queue.pop();
        if (ev.version != version[ev.point]) continue;
        while (next_sample < traj.sampled_times.size() && traj.sampled_times[next_sample] < ev.time) {
            traj.snapshots.push_back(state);
            ++next_sample;
        }
        const std::size_t k = ev.point;
        schedule(k, ev.time);
        const std::int64_t count = state.count(k);
        if (rates == ZeroRangeRates::per_site && ev.aux * static_cast<double>(count) >= 1.0) continue;
        const bool left = ev.uniform < 0.5;
        if ((left && k == 0) || (!left && k + 1 == n)) {
            ++traj.blocked;
            continue;
        }
        const std::size_t target = left ? k - 1 : k + 1;
        const int s = state.species(k);
        const std::int64_t before = state.signed_counts[k] + state.signed_counts[target];
        state.signed_counts[k] -= s;
        if (state.species(target) == -s) ++traj.annihilations;
        state.signed_counts[target] += s;
        ++traj.jumps;
        mass += state.signed_counts[k] + state.signed_counts[target] - before;
        if (mass != initial_mass) throw std::logic_error("zero range: signed mass changed");
        schedule(k, ev.time);
        schedule(target, ev.time);
    }
    while (next_sample < traj.sampled_times.size()) {
        traj.snapshots.push_back(state);
        ++next_sample;
    }
    traj.final_state = std::move(state);
    return traj;
}

}  // namespace isingdrop::particles
