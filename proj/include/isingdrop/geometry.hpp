#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace isingdrop::geometry {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

using Ring = std::vector<Point>;

struct Box {
    double xmin, ymin, xmax, ymax;
};

/// Polygonal region of the plane. Stored as a list of rings: outer
/// boundaries counterclockwise, holes clockwise. The common case is a
/// single counterclockwise ring; droplets with several components or holes
/// use more.
class PlanarShape {
public:
    PlanarShape() = default;

    /// Single simple polygon; orientation is normalized to counterclockwise.
    static PlanarShape polygon(std::vector<Point> vertices);
    /// Rings taken as given (outer ccw, holes cw). Degenerate rings dropped.
    static PlanarShape from_rings(std::vector<Ring> rings);
    static PlanarShape rectangle(double x0, double y0, double x1, double y1);
    /// Inscribed regular polygon of `n` vertices.
    static PlanarShape disk(Point center, double radius, std::size_t n);
    /// Inscribed polygon whose chords deviate from the circle by at most `arc_tolerance`.
    static PlanarShape disk_with_tolerance(Point center, double radius, double arc_tolerance);

    bool empty() const { return rings_.empty(); }
    const std::vector<Ring>& rings() const { return rings_; }
    /// Vertices of the first (outer) ring.
    const Ring& vertices() const;
    std::size_t vertex_count() const;

    /// True for a single ring whose turns are all left (collinear allowed).
    bool is_convex() const { return convex_; }

    /// Closed-set membership (points within 1e-12 of the boundary count as inside).
    bool contains(Point p) const;
    Box bounds() const;

    PlanarShape scaled(double s) const;
    PlanarShape translated(Point v) const;

private:
    void refresh();

    std::vector<Ring> rings_;
    bool convex_ = false;
};

double signed_ring_area(const Ring& ring);

/// Shoelace area (holes subtract).
double area_of(const PlanarShape& s);

/// Minkowski sum (delta > 0) or erosion (delta < 0) with the Euclidean disk
/// of radius |delta|. Arcs are polygonized with chord error <= arc_tolerance.
/// Eroding past the inradius yields the empty shape.
PlanarShape offset_shape(const PlanarShape& s, double delta, double arc_tolerance = 1e-4);

/// sup over points of `from` of the distance to `to` (0 where contained).
/// Boundary sampling: vertices always, plus edge subdivisions at spacing
/// `tolerance` when `to` is not convex.
double directed_hausdorff(const PlanarShape& from, const PlanarShape& to, double tolerance = 1e-4);

/// Symmetric Hausdorff distance between the closed regions. +inf if exactly
/// one operand is empty, 0 if both are.
double hausdorff_distance(const PlanarShape& a, const PlanarShape& b, double tolerance = 1e-4);

/// h(theta_i), theta_i = 2 pi i / N, sampled on a uniform angle grid.
class SupportFunction {
public:
    SupportFunction() = default;
    explicit SupportFunction(std::vector<double> values);

    template <class F>
    static SupportFunction sample(std::size_t n, F&& f) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = f(angle_of(i, n));
        return SupportFunction(std::move(v));
    }

    static double angle_of(std::size_t i, std::size_t n);

    std::size_t size() const { return values_.size(); }
    double angle(std::size_t i) const { return angle_of(i, values_.size()); }
    double step() const;
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

    /// Periodic second difference h''(theta_i).
    double second_difference(std::size_t i) const;
    /// Radius of curvature h + h'' at sample i.
    double radius_of_curvature(std::size_t i) const { return values_[i] + second_difference(i); }
    /// min_i (h + h''); the discrete convexity certificate is this >= -tol.
    double min_radius_of_curvature() const;
    bool is_convex(double tol = 1e-9) const { return min_radius_of_curvature() >= -tol; }

    /// Enclosed area 1/2 * integral (h^2 - h'^2), periodic differences.
    double enclosed_area() const;

private:
    std::vector<double> values_;
};

struct SupportSample {
    SupportFunction function;
    /// True when the input was not convex and its convex hull was used.
    bool convexified = false;
};

SupportSample support_function_of(const PlanarShape& s, std::size_t n);

/// {x : x . n_i <= offset_i} for unit normals n_i at the given angles.
struct HalfPlane {
    double angle;
    double offset;
};

/// Bounded intersection of half-planes (empty shape if infeasible or
/// degenerate). Any input order.
PlanarShape intersect_halfplanes(std::span<const HalfPlane> planes);

/// Intersection over the angle grid of {x : x . v(theta_i) <= h(theta_i)}.
PlanarShape shape_from_support(const SupportFunction& h);

/// Convex hull (counterclockwise, no collinear points).
std::vector<Point> convex_hull(std::vector<Point> pts);

/// Convex polygon clipping (both operands convex, single ring).
PlanarShape intersect_convex(const PlanarShape& a, const PlanarShape& b);

struct SandwichVerdict {
    bool inner_contained = false;  // inner ⊆ observed
    bool outer_contains = false;   // observed ⊆ outer
    double inner_margin = 0.0;     // sup_{x in inner} d(x, observed)
    double outer_margin = 0.0;     // sup_{x in observed} d(x, outer)
};

SandwichVerdict sandwich_check(const PlanarShape& inner, const PlanarShape& observed,
                               const PlanarShape& outer, double tolerance = 1e-4);

/// "x,y" header, one vertex per row, blank line between rings.
void write_polygon_csv(std::ostream& os, const PlanarShape& s);
PlanarShape read_polygon_csv(std::istream& is);

}  // namespace isingdrop::geometry
