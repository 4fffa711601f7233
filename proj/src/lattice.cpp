#include "isingdrop/lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace isingdrop::lattice {

using geometry::PlanarShape;
using geometry::Point;
using geometry::Ring;

void FieldParameter::validate() const {
    if (!(h >= 0.0)) throw std::invalid_argument("field h must be >= 0");
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
}

double FieldParameter::plus_tie_probability() const {
    if (std::isinf(h)) return 1.0;
    return 1.0 / (1.0 + std::exp(-2.0 * h));
}

SpinConfiguration::SpinConfiguration(int half_width, BoundaryRule rule)
    : half_width_(half_width), rule_(rule) {
    if (half_width < 1) throw std::invalid_argument("half width must be >= 1");
    const std::size_t stored = static_cast<std::size_t>(side() + 2 * kMargin);
    stride_ = (stored + 63) / 64;
    bits_.assign(stride_ * stored, 0);
    if (rule_ == BoundaryRule::frozen_mask) frozen_.assign((site_count() + 63) / 64, 0);
    fill_ghosts();
}

void SpinConfiguration::fill_ghosts() {
    if (rule_ != BoundaryRule::mixed_corner) return;
    const int s = side();
    for (int r = -kMargin; r < s + kMargin; ++r) {
        for (int c = -kMargin; c < s + kMargin; ++c) {
            if (in_window(c, r)) continue;
            const bool minus = r < 0 || (c < 0 && r < s);
            if (minus != is_minus(c, r)) flip(c, r);
        }
    }
}

void SpinConfiguration::set_spin(int col, int row, int value) {
    if (!in_window(col, row)) throw std::out_of_range("set_spin outside window");
    if ((value < 0) != is_minus(col, row)) flip(col, row);
}

void SpinConfiguration::set_frozen(int col, int row, bool frozen) {
    if (rule_ != BoundaryRule::frozen_mask)
        throw std::logic_error("frozen sites require the frozen_mask boundary rule");
    if (!in_window(col, row)) throw std::out_of_range("set_frozen outside window");
    const std::size_t i = index(col, row);
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (frozen)
        frozen_[i >> 6] |= bit;
    else
        frozen_[i >> 6] &= ~bit;
}

void SpinConfiguration::freeze_border(int width) {
    for (int r = 0; r < side(); ++r)
        for (int c = 0; c < side(); ++c)
            if (edge_distance(c, r) < width) set_frozen(c, r, true);
}

std::size_t SpinConfiguration::minus_count() const {
    std::size_t n = 0;
    for (int r = 0; r < side(); ++r)
        for (int c = 0; c < side(); ++c) n += is_minus(c, r);
    return n;
}

bool SpinConfiguration::dominates(const SpinConfiguration& other) const {
    if (other.half_width_ != half_width_) throw std::invalid_argument("window mismatch");
    for (int r = 0; r < side(); ++r)
        for (int c = 0; c < side(); ++c)
            if (is_minus(c, r) && !other.is_minus(c, r)) return false;
    return true;
}

bool SpinConfiguration::operator==(const SpinConfiguration& other) const {
    return half_width_ == other.half_width_ && rule_ == other.rule_ && bits_ == other.bits_ &&
           frozen_ == other.frozen_;
}

SpinConfiguration init_from_shape(const PlanarShape& shape, int L, BoundaryRule rule,
                                  int window_half_width) {
    if (L < 1) throw std::invalid_argument("L must be >= 1");
    const int W = window_half_width > 0 ? window_half_width : L;
    if (W < L) throw std::invalid_argument("window half width must be >= L");
    SpinConfiguration config(W, rule);
    if (shape.empty()) return config;
    const geometry::Box b = shape.bounds();
    constexpr double kSlack = 1e-12;
    if (b.xmin < -1.0 - kSlack || b.ymin < -1.0 - kSlack || b.xmax > 1.0 + kSlack ||
        b.ymax > 1.0 + kSlack)
        throw std::invalid_argument("shape must lie inside [-1,1]^2");

    const PlanarShape scaled = shape.scaled(static_cast<double>(L));
    std::vector<double> xs;
    for (int row = 0; row < config.side(); ++row) {
        const double y = row - W + 0.5;
        xs.clear();
        for (const Ring& ring : scaled.rings()) {
            const std::size_t n = ring.size();
            for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
                const Point a = ring[j];
                const Point c = ring[i];
                if ((a.y > y) != (c.y > y)) xs.push_back(a.x + (y - a.y) * (c.x - a.x) / (c.y - a.y));
            }
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            const int c0 = std::max(0, static_cast<int>(std::ceil(xs[k] + W - 0.5 - kSlack)));
            const int c1 = std::min(config.side() - 1,
                                    static_cast<int>(std::floor(xs[k + 1] + W - 0.5 + kSlack)));
            for (int col = c0; col <= c1; ++col) config.set_spin(col, row, -1);
        }
    }
    return config;
}

SpinConfiguration init_from_predicate(int half_width, BoundaryRule rule,
                                      const std::function<bool(Point)>& minus) {
    SpinConfiguration config(half_width, rule);
    for (int r = 0; r < config.side(); ++r)
        for (int c = 0; c < config.side(); ++c)
            if (minus(config.center(c, r))) config.set_spin(c, r, -1);
    return config;
}

namespace {

struct Edge {
    std::int64_t x0, y0, x1, y1;
    int dir;  // 0 east, 1 north, 2 west, 3 south
};

std::uint64_t vertex_key(std::int64_t x, std::int64_t y) {
    return (static_cast<std::uint64_t>(x + (1 << 30)) << 32) | static_cast<std::uint64_t>(y + (1 << 30));
}

void drop_collinear(Ring& ring) {
    bool changed = true;
    while (changed && ring.size() >= 3) {
        changed = false;
        Ring out;
        const std::size_t n = ring.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point a = ring[(i + n - 1) % n];
            const Point b = ring[i];
            const Point c = ring[(i + 1) % n];
            if (geometry::cross(b - a, c - b) == 0.0) {
                changed = true;
                continue;
            }
            out.push_back(b);
        }
        ring = std::move(out);
    }
}

}  // namespace

PlanarShape droplet_shape(const SpinConfiguration& config) {
    const int W = config.half_width();
    const int s = config.side();
    auto minus = [&](int c, int r) { return config.in_window(c, r) && config.is_minus(c, r); };

    std::vector<Edge> edges;
    for (int r = 0; r < s; ++r) {
        for (int c = 0; c < s; ++c) {
            if (!config.is_minus(c, r)) continue;
            const std::int64_t x = c - W;
            const std::int64_t y = r - W;
            if (!minus(c, r - 1)) edges.push_back({x, y, x + 1, y, 0});
            if (!minus(c + 1, r)) edges.push_back({x + 1, y, x + 1, y + 1, 1});
            if (!minus(c, r + 1)) edges.push_back({x + 1, y + 1, x, y + 1, 2});
            if (!minus(c - 1, r)) edges.push_back({x, y + 1, x, y, 3});
        }
    }
    if (edges.empty()) return {};

    std::unordered_map<std::uint64_t, std::array<int, 2>> outgoing;
    outgoing.reserve(edges.size());
    for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
        auto [it, fresh] = outgoing.try_emplace(vertex_key(edges[i].x0, edges[i].y0), std::array<int, 2>{-1, -1});
        (it->second[0] < 0 ? it->second[0] : it->second[1]) = i;
    }

    std::vector<char> used(edges.size(), 0);
    std::vector<Ring> rings;
    for (std::size_t start = 0; start < edges.size(); ++start) {
        if (used[start]) continue;
        Ring ring;
        int cur = static_cast<int>(start);
        while (true) {
            used[cur] = 1;
            const Edge& e = edges[cur];
            ring.push_back({static_cast<double>(e.x0), static_cast<double>(e.y0)});
            const auto& cand = outgoing.at(vertex_key(e.x1, e.y1));
            int next = cand[0];
            if (cand[1] >= 0) {
                // Saddle vertex: take the left turn so diagonal cells stay separate.
                const int left = (e.dir + 1) % 4;
                next = edges[cand[0]].dir == left ? cand[0] : cand[1];
            }
            if (next == static_cast<int>(start) || used[next]) break;
            cur = next;
        }
        drop_collinear(ring);
        if (ring.size() >= 3) rings.push_back(std::move(ring));
    }
    return PlanarShape::from_rings(std::move(rings));
}

DropletSet droplet_of(const SpinConfiguration& config) {
    DropletSet d;
    for (int r = 0; r < config.side(); ++r)
        for (int c = 0; c < config.side(); ++c)
            if (config.is_minus(c, r)) d.minus_sites.push_back({c, r});
    if (!d.minus_sites.empty()) d.shape = droplet_shape(config);
    return d;
}

bool is_increasing_set(const SpinConfiguration& config) {
    const int s = config.side();
    for (int r = 0; r < s; ++r) {
        for (int c = 0; c < s; ++c) {
            if (config.is_minus(c, r)) continue;
            if (c + 1 < s && config.is_minus(c + 1, r)) return false;
            if (r + 1 < s && config.is_minus(c, r + 1)) return false;
        }
    }
    return true;
}

void write_rle_json(std::ostream& os, const SpinConfiguration& config) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < config.side(); ++r) {
        nlohmann::json runs = nlohmann::json::array();
        int c = 0;
        while (c < config.side()) {
            if (!config.is_minus(c, r)) {
                ++c;
                continue;
            }
            const int start = c;
            while (c < config.side() && config.is_minus(c, r)) ++c;
            runs.push_back(start);
            runs.push_back(c - start);
        }
        rows.push_back(std::move(runs));
    }
    nlohmann::json j;
    j["half_width"] = config.half_width();
    j["rows"] = std::move(rows);
    os << j.dump() << '\n';
}

SpinConfiguration read_rle_json(std::istream& is, BoundaryRule rule) {
    const nlohmann::json j = nlohmann::json::parse(is);
    const int W = j.at("half_width").get<int>();
    SpinConfiguration config(W, rule);
    const auto& rows = j.at("rows");
    if (static_cast<int>(rows.size()) != config.side()) throw std::runtime_error("rle json: row count");
    for (int r = 0; r < config.side(); ++r) {
        const auto& runs = rows[static_cast<std::size_t>(r)];
        for (std::size_t k = 0; k + 1 < runs.size(); k += 2) {
            const int start = runs[k].get<int>();
            const int len = runs[k + 1].get<int>();
            for (int c = start; c < start + len; ++c) config.set_spin(c, r, -1);
        }
    }
    return config;
}

void write_pbm(std::ostream& os, const SpinConfiguration& config) {
    os << "P1\n" << config.side() << ' ' << config.side() << '\n';
    for (int r = config.side() - 1; r >= 0; --r) {
        for (int c = 0; c < config.side(); ++c) os << (config.is_minus(c, r) ? '1' : '0');
        os << '\n';
    }
}

}  // namespace isingdrop::lattice
