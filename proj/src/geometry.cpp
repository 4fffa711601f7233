#include "isingdrop/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/index/rtree.hpp>

namespace isingdrop::geometry {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

namespace {

using BPoint = bg::model::d2::point_xy<double>;
using BSegment = bg::model::segment<BPoint>;
using BPolygon = bg::model::polygon<BPoint, false, true>;
using BMulti = bg::model::multi_polygon<BPolygon>;

constexpr double kBoundaryEps = 1e-12;

double point_segment_distance(Point p, Point a, Point b) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    double s = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    const Point q = a + s * ab;
    return std::hypot(p.x - q.x, p.y - q.y);
}

bool ring_parity(const Ring& ring, Point p) {
    bool inside = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point a = ring[j];
        const Point b = ring[i];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xi = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xi) inside = !inside;
        }
    }
    return inside;
}

// Spatial index over a shape's boundary: nearest-segment queries through an
// R-tree and crossing-number containment through horizontal buckets.
class RegionIndex {
public:
    explicit RegionIndex(const PlanarShape& s) {
        std::vector<std::pair<BSegment, std::uint32_t>> items;
        for (const Ring& ring : s.rings()) {
            for (std::size_t i = 0; i < ring.size(); ++i) {
                const Point a = ring[i];
                const Point b = ring[(i + 1) % ring.size()];
                const auto id = static_cast<std::uint32_t>(segs_.size());
                segs_.push_back({a, b});
                items.emplace_back(BSegment(BPoint(a.x, a.y), BPoint(b.x, b.y)), id);
            }
        }
        tree_ = Tree(items.begin(), items.end());

        const Box box = s.bounds();
        y0_ = box.ymin;
        const std::size_t nb = std::max<std::size_t>(1, segs_.size() / 4);
        const double span = std::max(box.ymax - box.ymin, 1e-300);
        inv_h_ = static_cast<double>(nb) / span;
        buckets_.resize(nb);
        for (std::uint32_t id = 0; id < segs_.size(); ++id) {
            const auto [a, b] = segs_[id];
            const std::size_t lo = bucket_of(std::min(a.y, b.y));
            const std::size_t hi = bucket_of(std::max(a.y, b.y));
            for (std::size_t k = lo; k <= hi; ++k) buckets_[k].push_back(id);
        }
    }

    double boundary_distance(Point p) const {
        std::vector<std::pair<BSegment, std::uint32_t>> hits;
        tree_.query(bgi::nearest(BPoint(p.x, p.y), 1), std::back_inserter(hits));
        if (hits.empty()) return std::numeric_limits<double>::infinity();
        const auto& seg = segs_[hits.front().second];
        return point_segment_distance(p, seg.first, seg.second);
    }

    bool contains_strict(Point p) const {
        if (p.y < y0_ || buckets_.empty()) return false;
        const std::size_t k = bucket_of(p.y);
        bool inside = false;
        for (std::uint32_t id : buckets_[k]) {
            const auto [a, b] = segs_[id];
            if ((a.y > p.y) != (b.y > p.y)) {
                const double xi = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if (p.x < xi) inside = !inside;
            }
        }
        return inside;
    }

    double region_distance(Point p) const {
        const double d = boundary_distance(p);
        if (d <= kBoundaryEps) return 0.0;
        return contains_strict(p) ? 0.0 : d;
    }

private:
    using Tree = bgi::rtree<std::pair<BSegment, std::uint32_t>, bgi::quadratic<16>>;

    std::size_t bucket_of(double y) const {
        const double f = (y - y0_) * inv_h_;
        if (!(f > 0.0)) return 0;
        return std::min(buckets_.size() - 1, static_cast<std::size_t>(f));
    }

    std::vector<std::pair<Point, Point>> segs_;
    Tree tree_;
    double y0_ = 0.0;
    double inv_h_ = 1.0;
    std::vector<std::vector<std::uint32_t>> buckets_;
};

BMulti to_boost(const PlanarShape& s) {
    BMulti out;
    std::vector<const Ring*> holes;
    for (const Ring& r : s.rings()) {
        if (signed_ring_area(r) > 0.0) {
            BPolygon poly;
            for (const Point& p : r) bg::append(poly.outer(), BPoint(p.x, p.y));
            bg::append(poly.outer(), BPoint(r.front().x, r.front().y));
            out.push_back(std::move(poly));
        } else {
            holes.push_back(&r);
        }
    }
    for (const Ring* h : holes) {
        // Attach to the smallest outer ring containing the hole.
        std::size_t best = out.size();
        double best_area = std::numeric_limits<double>::infinity();
        const Point probe = (*h)[0];
        for (std::size_t k = 0; k < out.size(); ++k) {
            if (bg::covered_by(BPoint(probe.x, probe.y), out[k].outer())) {
                const double a = bg::area(out[k].outer());
                if (a < best_area) {
                    best_area = a;
                    best = k;
                }
            }
        }
        if (best == out.size()) continue;
        BPolygon::ring_type inner;
        for (const Point& p : *h) bg::append(inner, BPoint(p.x, p.y));
        bg::append(inner, BPoint(h->front().x, h->front().y));
        out[best].inners().push_back(std::move(inner));
    }
    bg::correct(out);
    return out;
}

Ring ring_from_boost(const BPolygon::ring_type& r) {
    Ring ring;
    ring.reserve(r.size());
    for (const auto& p : r) ring.push_back({p.x(), p.y()});
    if (ring.size() > 1) {
        const Point a = ring.front();
        const Point b = ring.back();
        if (a.x == b.x && a.y == b.y) ring.pop_back();
    }
    return ring;
}

PlanarShape from_boost(const BMulti& m) {
    std::vector<Ring> rings;
    for (const auto& poly : m) {
        rings.push_back(ring_from_boost(poly.outer()));
        for (const auto& in : poly.inners()) rings.push_back(ring_from_boost(in));
    }
    return PlanarShape::from_rings(std::move(rings));
}

double shape_scale(const PlanarShape& s) {
    if (s.empty()) return 1.0;
    const Box b = s.bounds();
    return std::max({1.0, std::abs(b.xmin), std::abs(b.xmax), std::abs(b.ymin), std::abs(b.ymax)});
}

}  // namespace

double signed_ring_area(const Ring& ring) {
    double a = 0.0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) a += cross(ring[j], ring[i]);
    return 0.5 * a;
}

PlanarShape PlanarShape::polygon(std::vector<Point> vertices) {
    if (vertices.size() >= 3 && signed_ring_area(vertices) < 0.0)
        std::reverse(vertices.begin(), vertices.end());
    std::vector<Ring> rings;
    rings.push_back(std::move(vertices));
    return from_rings(std::move(rings));
}

PlanarShape PlanarShape::from_rings(std::vector<Ring> rings) {
    PlanarShape s;
    for (Ring& r : rings) {
        if (r.size() >= 3 && std::abs(signed_ring_area(r)) > 0.0) s.rings_.push_back(std::move(r));
    }
    s.refresh();
    return s;
}

PlanarShape PlanarShape::rectangle(double x0, double y0, double x1, double y1) {
    return polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

PlanarShape PlanarShape::disk(Point center, double radius, std::size_t n) {
    std::vector<Point> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        v[i] = {center.x + radius * std::cos(th), center.y + radius * std::sin(th)};
    }
    return polygon(std::move(v));
}

PlanarShape PlanarShape::disk_with_tolerance(Point center, double radius, double arc_tolerance) {
    const double c = std::clamp(1.0 - arc_tolerance / radius, -1.0, 1.0);
    const auto n = static_cast<std::size_t>(std::ceil(std::numbers::pi / std::acos(c)));
    return disk(center, radius, std::max<std::size_t>(n, 8));
}

const Ring& PlanarShape::vertices() const {
    static const Ring kEmpty;
    return rings_.empty() ? kEmpty : rings_.front();
}

std::size_t PlanarShape::vertex_count() const {
    std::size_t n = 0;
    for (const Ring& r : rings_) n += r.size();
    return n;
}

void PlanarShape::refresh() {
    convex_ = false;
    if (rings_.size() != 1) return;
    const Ring& r = rings_.front();
    if (signed_ring_area(r) <= 0.0) return;
    double scale = 0.0;
    for (const Point& p : r) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
    const double eps = 1e-12 * std::max(scale * scale, 1e-300);
    const std::size_t n = r.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = r[i];
        const Point b = r[(i + 1) % n];
        const Point c = r[(i + 2) % n];
        if (cross(b - a, c - b) < -eps) return;
    }
    convex_ = true;
}

bool PlanarShape::contains(Point p) const {
    bool inside = false;
    for (const Ring& r : rings_) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (point_segment_distance(p, r[i], r[(i + 1) % r.size()]) <= kBoundaryEps) return true;
        }
        if (ring_parity(r, p)) inside = !inside;
    }
    return inside;
}

Box PlanarShape::bounds() const {
    Box b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const Ring& r : rings_) {
        for (const Point& p : r) {
            b.xmin = std::min(b.xmin, p.x);
            b.ymin = std::min(b.ymin, p.y);
            b.xmax = std::max(b.xmax, p.x);
            b.ymax = std::max(b.ymax, p.y);
        }
    }
    return b;
}

PlanarShape PlanarShape::scaled(double s) const {
    std::vector<Ring> rings = rings_;
    for (Ring& r : rings)
        for (Point& p : r) p = s * p;
    return from_rings(std::move(rings));
}

PlanarShape PlanarShape::translated(Point v) const {
    std::vector<Ring> rings = rings_;
    for (Ring& r : rings)
        for (Point& p : r) p = p + v;
    return from_rings(std::move(rings));
}

double area_of(const PlanarShape& s) {
    double a = 0.0;
    for (const Ring& r : s.rings()) a += signed_ring_area(r);
    return a;
}

PlanarShape offset_shape(const PlanarShape& s, double delta, double arc_tolerance) {
    if (s.empty() || delta == 0.0) return s;
    const double c = std::clamp(1.0 - arc_tolerance / std::abs(delta), -1.0, 1.0);
    const int per_circle =
        std::max(8, static_cast<int>(std::ceil(2.0 * std::numbers::pi / (2.0 * std::acos(c)))));

    const BMulti in = to_boost(s);
    BMulti out;
    bg::strategy::buffer::distance_symmetric<double> distance(delta);
    bg::strategy::buffer::join_round join(per_circle);
    bg::strategy::buffer::end_round end(per_circle);
    bg::strategy::buffer::point_circle circle(per_circle);
    bg::strategy::buffer::side_straight side;
    bg::buffer(in, out, distance, side, join, end, circle);
    return from_boost(out);
}

double directed_hausdorff(const PlanarShape& from, const PlanarShape& to, double tolerance) {
    if (from.empty()) return 0.0;
    if (to.empty()) return std::numeric_limits<double>::infinity();
    const RegionIndex index(to);
    const bool subdivide = !to.is_convex();
    double worst = 0.0;
    for (const Ring& r : from.rings()) {
        const std::size_t n = r.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point a = r[i];
            const Point b = r[(i + 1) % n];
            worst = std::max(worst, index.region_distance(a));
            if (!subdivide) continue;
            const double len = std::hypot(b.x - a.x, b.y - a.y);
            const auto pieces = static_cast<std::size_t>(std::ceil(len / tolerance));
            for (std::size_t k = 1; k < pieces; ++k) {
                const double s = static_cast<double>(k) / static_cast<double>(pieces);
                worst = std::max(worst, index.region_distance(a + s * (b - a)));
            }
        }
    }
    return worst;
}

double hausdorff_distance(const PlanarShape& a, const PlanarShape& b, double tolerance) {
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    return std::max(directed_hausdorff(a, b, tolerance), directed_hausdorff(b, a, tolerance));
}

// ---------------------------------------------------------------------------
// Support functions

SupportFunction::SupportFunction(std::vector<double> values) : values_(std::move(values)) {}

double SupportFunction::angle_of(std::size_t i, std::size_t n) {
    return 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
}

double SupportFunction::step() const {
    return 2.0 * std::numbers::pi / static_cast<double>(values_.size());
}

double SupportFunction::second_difference(std::size_t i) const {
    const std::size_t n = values_.size();
    const double d = step();
    return (values_[(i + 1) % n] - 2.0 * values_[i] + values_[(i + n - 1) % n]) / (d * d);
}

double SupportFunction::min_radius_of_curvature() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values_.size(); ++i) m = std::min(m, radius_of_curvature(i));
    return m;
}

double SupportFunction::enclosed_area() const {
    const std::size_t n = values_.size();
    const double d = step();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double h = values_[i];
        const double hp = (values_[(i + 1) % n] - values_[(i + n - 1) % n]) / (2.0 * d);
        acc += h * h - hp * hp;
    }
    return 0.5 * acc * d;
}

SupportSample support_function_of(const PlanarShape& s, std::size_t n) {
    if (s.empty()) throw std::invalid_argument("support_function_of: empty shape");
    std::vector<Point> pts;
    for (const Ring& r : s.rings()) pts.insert(pts.end(), r.begin(), r.end());
    const std::vector<Point> hull = convex_hull(std::move(pts));
    SupportSample out;
    out.convexified = !s.is_convex();
    out.function = SupportFunction::sample(n, [&](double th) {
        const Point v{std::cos(th), std::sin(th)};
        double best = -std::numeric_limits<double>::infinity();
        for (const Point& p : hull) best = std::max(best, dot(p, v));
        return best;
    });
    return out;
}

std::vector<Point> convex_hull(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end(),
              [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](Point a, Point b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && cross(h[k - 1] - h[k - 2], pts[i - 1] - h[k - 2]) <= 0.0) --k;
        h[k++] = pts[i - 1];
    }
    h.resize(k - 1);
    return h;
}

namespace {

struct DirectedLine {
    Point p;
    Point d;
    double angle;
};

Point line_intersection(const DirectedLine& a, const DirectedLine& b) {
    const double t = cross(b.p - a.p, b.d) / cross(a.d, b.d);
    return a.p + t * a.d;
}

}  // namespace

PlanarShape intersect_halfplanes(std::span<const HalfPlane> planes) {
    if (planes.empty()) return {};
    double scale = 1.0;
    for (const HalfPlane& h : planes) scale = std::max(scale, std::abs(h.offset));
    const double eps = 1e-12 * scale;
    const double box = 1e3 * scale;

    std::vector<DirectedLine> lines;
    lines.reserve(planes.size() + 4);
    auto add = [&](double angle, double offset) {
        const Point n{std::cos(angle), std::sin(angle)};
        const Point d{-n.y, n.x};
        lines.push_back({offset * n, d, std::atan2(d.y, d.x)});
    };
    for (const HalfPlane& h : planes) add(h.angle, h.offset);
    for (int k = 0; k < 4; ++k) add(k * std::numbers::pi / 2.0, box);
    std::stable_sort(lines.begin(), lines.end(),
                     [](const DirectedLine& a, const DirectedLine& b) { return a.angle < b.angle; });

    auto out = [&](const DirectedLine& l, Point r) { return cross(l.d, r - l.p) < -eps; };

    std::deque<DirectedLine> dq;
    for (const DirectedLine& l : lines) {
        while (dq.size() > 1 && out(l, line_intersection(dq[dq.size() - 1], dq[dq.size() - 2])))
            dq.pop_back();
        while (dq.size() > 1 && out(l, line_intersection(dq[0], dq[1]))) dq.pop_front();
        if (!dq.empty() && std::abs(cross(l.d, dq.back().d)) < 1e-15) {
            if (dot(l.d, dq.back().d) < 0.0) return {};
            if (out(l, dq.back().p)) {
                dq.pop_back();
            } else {
                continue;
            }
        }
        dq.push_back(l);
    }
    while (dq.size() > 2 && out(dq[0], line_intersection(dq[dq.size() - 1], dq[dq.size() - 2])))
        dq.pop_back();
    while (dq.size() > 2 && out(dq[dq.size() - 1], line_intersection(dq[0], dq[1]))) dq.pop_front();
    if (dq.size() < 3) return {};

    std::vector<Point> v;
    v.reserve(dq.size());
    for (std::size_t i = 0; i < dq.size(); ++i) {
        const Point q = line_intersection(dq[i], dq[(i + 1) % dq.size()]);
        if (!v.empty() && std::hypot(q.x - v.back().x, q.y - v.back().y) <= 1e-12 * scale) continue;
        v.push_back(q);
    }
    while (v.size() > 1 &&
           std::hypot(v.front().x - v.back().x, v.front().y - v.back().y) <= 1e-12 * scale)
        v.pop_back();
    if (v.size() < 3) return {};
    if (signed_ring_area(v) <= 1e-14 * scale * scale) return {};
    return PlanarShape::polygon(std::move(v));
}

PlanarShape shape_from_support(const SupportFunction& h) {
    std::vector<HalfPlane> planes(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) planes[i] = {h.angle(i), h[i]};
    return intersect_halfplanes(planes);
}

PlanarShape intersect_convex(const PlanarShape& a, const PlanarShape& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Point> poly = a.vertices();
    const Ring& clip = b.vertices();
    const std::size_t m = clip.size();
    for (std::size_t i = 0; i < m && !poly.empty(); ++i) {
        const Point c0 = clip[i];
        const Point c1 = clip[(i + 1) % m];
        const Point e = c1 - c0;
        auto side = [&](Point p) { return cross(e, p - c0); };
        std::vector<Point> next;
        const std::size_t n = poly.size();
        for (std::size_t k = 0; k < n; ++k) {
            const Point p = poly[k];
            const Point q = poly[(k + 1) % n];
            const double sp = side(p);
            const double sq = side(q);
            if (sp >= 0.0) next.push_back(p);
            if ((sp >= 0.0) != (sq >= 0.0)) {
                const double t = sp / (sp - sq);
                next.push_back(p + t * (q - p));
            }
        }
        poly = std::move(next);
    }
    if (poly.size() < 3) return {};
    return PlanarShape::polygon(std::move(poly));
}

SandwichVerdict sandwich_check(const PlanarShape& inner, const PlanarShape& observed,
                               const PlanarShape& outer, double tolerance) {
    constexpr double kContainEps = 1e-9;
    SandwichVerdict v;
    v.inner_margin = directed_hausdorff(inner, observed, tolerance);
    v.outer_margin = directed_hausdorff(observed, outer, tolerance);
    v.inner_contained = v.inner_margin <= kContainEps * shape_scale(observed);
    v.outer_contains = v.outer_margin <= kContainEps * shape_scale(outer);
    return v;
}

void write_polygon_csv(std::ostream& os, const PlanarShape& s) {
    os << "x,y\n";
    os << std::setprecision(17);
    bool first = true;
    for (const Ring& r : s.rings()) {
        if (!first) os << '\n';
        first = false;
        for (const Point& p : r) os << p.x << ',' << p.y << '\n';
    }
}

PlanarShape read_polygon_csv(std::istream& is) {
    std::vector<Ring> rings(1);
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) {
            if (!rings.back().empty()) rings.emplace_back();
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("polygon csv: missing comma: " + line);
        try {
            std::size_t used = 0;
            const double x = std::stod(line.substr(0, comma), &used);
            const double y = std::stod(line.substr(comma + 1));
            rings.back().push_back({x, y});
        } catch (const std::invalid_argument&) {
            if (rings.size() == 1 && rings.back().empty()) continue;  // header
            throw std::runtime_error("polygon csv: bad row: " + line);
        }
    }
    if (rings.back().empty()) rings.pop_back();
    if (rings.size() == 1) return PlanarShape::polygon(std::move(rings.front()));
    return PlanarShape::from_rings(std::move(rings));
}

}  // namespace isingdrop::geometry
