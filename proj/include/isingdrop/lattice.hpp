#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <vector>

#include "isingdrop/geometry.hpp"

namespace isingdrop::lattice {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Magnetic field h in [0, inf] and inverse temperature beta in (0, inf].
struct FieldParameter {
    double h = 0.0;
    double beta = kInfinity;

    void validate() const;
    bool zero_temperature() const { return std::isinf(beta); }
    /// e^h / (2 cosh h): probability that a 2-2 tie resolves to +.
    double plus_tie_probability() const;
};

enum class BoundaryRule {
    all_plus,
    mixed_corner,  // + on the up and right sides, - on the down and left sides
    frozen_mask,   // + outside; an explicit set of window sites never updates
};

/// Window index of a site. Columns and rows run over [0, 2W); the site center
/// is (col - W + 1/2, row - W + 1/2).
struct Site {
    int col = 0;
    int row = 0;
    bool operator==(const Site&) const = default;
};

/// Finite window of +-1 spins on (Z + 1/2)^2 ∩ [-W, W]^2, bit-packed row-major
/// (bit set = minus). Two rings of ghost sites hold the boundary values so
/// neighbor reads never branch.
class SpinConfiguration {
public:
    static constexpr int kMargin = 2;

    SpinConfiguration() = default;
    SpinConfiguration(int half_width, BoundaryRule rule);

    int half_width() const { return half_width_; }
    int side() const { return 2 * half_width_; }
    std::size_t site_count() const { return static_cast<std::size_t>(side()) * side(); }
    BoundaryRule boundary_rule() const { return rule_; }

    /// Valid for col, row in [-kMargin, side() + kMargin).
    bool is_minus(int col, int row) const {
        const std::size_t c = static_cast<std::size_t>(col + kMargin);
        const std::size_t r = static_cast<std::size_t>(row + kMargin);
        return (bits_[r * stride_ + (c >> 6)] >> (c & 63)) & 1u;
    }
    int spin(int col, int row) const { return is_minus(col, row) ? -1 : 1; }
    int spin(Site s) const { return spin(s.col, s.row); }

    /// Sum of the four neighbor spins.
    int neighbor_sum(int col, int row) const {
        const int minus = static_cast<int>(is_minus(col - 1, row)) + is_minus(col + 1, row) +
                          is_minus(col, row - 1) + is_minus(col, row + 1);
        return 4 - 2 * minus;
    }

    /// Window sites only.
    void set_spin(int col, int row, int value);
    void flip(int col, int row) {
        const std::size_t c = static_cast<std::size_t>(col + kMargin);
        const std::size_t r = static_cast<std::size_t>(row + kMargin);
        bits_[r * stride_ + (c >> 6)] ^= std::uint64_t{1} << (c & 63);
    }

    bool in_window(int col, int row) const {
        return col >= 0 && row >= 0 && col < side() && row < side();
    }
    bool is_frozen(int col, int row) const {
        if (frozen_.empty()) return false;
        const std::size_t i = index(col, row);
        return (frozen_[i >> 6] >> (i & 63)) & 1u;
    }
    /// Marks a window site frozen; switches the rule to frozen_mask.
    void set_frozen(int col, int row, bool frozen);
    /// Freezes every window site within `width` cells of the window edge.
    void freeze_border(int width);

    std::size_t index(int col, int row) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(side()) +
               static_cast<std::size_t>(col);
    }
    Site site_of(std::size_t index) const {
        return {static_cast<int>(index % static_cast<std::size_t>(side())),
                static_cast<int>(index / static_cast<std::size_t>(side()))};
    }
    geometry::Point center(int col, int row) const {
        return {col - half_width_ + 0.5, row - half_width_ + 0.5};
    }
    /// Cells from the nearest window edge (0 for the outermost ring).
    int edge_distance(int col, int row) const {
        return std::min(std::min(col, row), std::min(side() - 1 - col, side() - 1 - row));
    }

    std::size_t minus_count() const;

    /// Coordinatewise order: every spin of *this >= the corresponding spin of other.
    bool dominates(const SpinConfiguration& other) const;

    bool operator==(const SpinConfiguration& other) const;

private:
    void fill_ghosts();

    int half_width_ = 0;
    BoundaryRule rule_ = BoundaryRule::all_plus;
    std::size_t stride_ = 0;  // words per stored row (ghosts included)
    std::vector<std::uint64_t> bits_;
    std::vector<std::uint64_t> frozen_;
};

/// sigma_x = -1 iff x ∈ L * shape (site centers, boundary counts as inside).
/// The window half-width defaults to L. Throws std::invalid_argument if the
/// shape is not contained in [-1, 1]^2.
SpinConfiguration init_from_shape(const geometry::PlanarShape& shape, int L, BoundaryRule rule,
                                  int window_half_width = 0);

/// sigma_x = -1 iff minus(center of x).
SpinConfiguration init_from_predicate(int half_width, BoundaryRule rule,
                                      const std::function<bool(geometry::Point)>& minus);

struct DropletSet {
    std::vector<Site> minus_sites;
    /// Union of the unit squares around minus sites, lattice units.
    geometry::PlanarShape shape;

    bool empty() const { return minus_sites.empty(); }
    geometry::PlanarShape rescaled(double L) const { return shape.scaled(1.0 / L); }
};

DropletSet droplet_of(const SpinConfiguration& config);

/// Boundary of the union of minus cells, without enumerating the sites.
geometry::PlanarShape droplet_shape(const SpinConfiguration& config);

/// True iff the + spins in the window form an increasing set.
bool is_increasing_set(const SpinConfiguration& config);

// Snapshot exports. Minus runs per row, bottom row first:
// {"half_width":W,"rows":[[start,len,...],...]}
void write_rle_json(std::ostream& os, const SpinConfiguration& config);
SpinConfiguration read_rle_json(std::istream& is, BoundaryRule rule = BoundaryRule::all_plus);
/// Plain PBM ("P1"), top row first, 1 = minus.
void write_pbm(std::ostream& os, const SpinConfiguration& config);

}  // namespace isingdrop::lattice
