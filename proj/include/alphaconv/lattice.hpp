#pragma once

// Uniform grid over a strictly convex domain, primitive wide-stencil
// direction sets, and per-node chord arms: for every interior node and
// stencil line, the two neighbours (grid node or boundary exit with its
// datum value) and the barycentric position t0 of the node on that chord.

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "alphaconv/geometry.hpp"

namespace alphaconv {

class Grid {
public:
    Grid(const StrictlyConvexDomain& domain, double h) : h_(h), origin_(domain.center()) {
        if (!(h > 0.0)) throw std::domain_error("build_grid: h must be positive");
        if (h > domain.diameter() / 4.0)
            throw std::domain_error("build_grid: h exceeds a quarter of the domain diameter");
        const BBox box = domain.bounding_box();
        i_lo_ = static_cast<int>(std::floor((box.xmin - origin_.x) / h)) - 1;
        i_hi_ = static_cast<int>(std::ceil((box.xmax - origin_.x) / h)) + 1;
        j_lo_ = static_cast<int>(std::floor((box.ymin - origin_.y) / h)) - 1;
        j_hi_ = static_cast<int>(std::ceil((box.ymax - origin_.y) / h)) + 1;
        const int ni = i_hi_ - i_lo_ + 1;
        const int nj = j_hi_ - j_lo_ + 1;
        index_.assign(static_cast<size_t>(ni) * nj, -1);
        for (int j = j_lo_; j <= j_hi_; ++j) {
            for (int i = i_lo_; i <= i_hi_; ++i) {
                if (domain.contains(coord_of(i, j))) {
                    index_[slot(i, j)] = static_cast<int>(nodes_.size());
                    nodes_.push_back({i, j});
                }
            }
        }
        if (nodes_.empty()) throw std::domain_error("build_grid: no interior lattice points");
        column_major_.resize(nodes_.size());
        std::iota(column_major_.begin(), column_major_.end(), 0);
        std::sort(column_major_.begin(), column_major_.end(), [&](int a, int b) {
            if (nodes_[a].first != nodes_[b].first) return nodes_[a].first < nodes_[b].first;
            return nodes_[a].second < nodes_[b].second;
        });
    }

    double spacing() const { return h_; }
    Vec2 origin() const { return origin_; }
    size_t size() const { return nodes_.size(); }

    std::pair<int, int> node(int n) const { return nodes_[n]; }
    Vec2 coord(int n) const { return coord_of(nodes_[n].first, nodes_[n].second); }
    Vec2 coord_of(int i, int j) const { return {origin_.x + i * h_, origin_.y + j * h_}; }

    // Node index at lattice position (i,j), or -1.
    int find(int i, int j) const {
        if (i < i_lo_ || i > i_hi_ || j < j_lo_ || j > j_hi_) return -1;
        return index_[slot(i, j)];
    }

    // Nodes are stored row-major (j ascending, then i); this is the
    // column-major permutation used by the cycling sweep orders.
    const std::vector<int>& column_major_order() const { return column_major_; }

    bool same_layout(const Grid& o) const {
        return h_ == o.h_ && origin_.x == o.origin_.x && origin_.y == o.origin_.y &&
               nodes_ == o.nodes_;
    }

private:
    size_t slot(int i, int j) const {
        return static_cast<size_t>(j - j_lo_) * (i_hi_ - i_lo_ + 1) + (i - i_lo_);
    }

    double h_;
    Vec2 origin_;
    int i_lo_ = 0, i_hi_ = 0, j_lo_ = 0, j_hi_ = 0;
    std::vector<std::pair<int, int>> nodes_;
    std::vector<int> index_;
    std::vector<int> column_major_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr build_grid(const StrictlyConvexDomain& domain, double h) {
    return std::make_shared<const Grid>(domain, h);
}

// Primitive integer directions (p,q), gcd(|p|,|q|) = 1, max(|p|,|q|) <= W,
// one representative per antipodal line pair (upper half-plane convention),
// sorted by angle.  W = 1 gives 4 lines, W = 2 gives 8, W = 3 gives 16.
struct DirectionSet {
    int width = 1;
    std::vector<std::pair<int, int>> lines;

    size_t size() const { return lines.size(); }
};

inline DirectionSet build_directions(int width) {
    if (width < 1) throw std::domain_error("build_directions: width must be >= 1");
    DirectionSet set;
    set.width = width;
    for (int q = 0; q <= width; ++q) {
        for (int p = -width; p <= width; ++p) {
            if (q == 0 && p <= 0) continue;  // (1,0) is the only horizontal representative
            if (q > 0 && std::gcd(std::abs(p), q) != 1) continue;
            if (q == 0 && p != 1) continue;
            set.lines.emplace_back(p, q);
        }
    }
    std::sort(set.lines.begin(), set.lines.end(), [](auto a, auto b) {
        return std::atan2(static_cast<double>(a.second), static_cast<double>(a.first)) <
               std::atan2(static_cast<double>(b.second), static_cast<double>(b.first));
    });
    return set;
}

// One half of a chord: either the stepped grid node (length exactly |d| h)
// or the boundary exit along the same line with the datum value there.
struct Arm {
    int node = -1;       // interior node index, or -1 for a boundary arm
    double s = 0.0;      // Euclidean arm length
    double g = 0.0;      // boundary value (boundary arms only)
    Vec2 exit{};         // boundary exit point (boundary arms only)

    bool interior() const { return node >= 0; }
};

class ArmTable {
public:
    ArmTable(GridPtr grid, const StrictlyConvexDomain& domain, const BoundaryDatum& datum,
             DirectionSet dirs)
        : grid_(std::move(grid)), dirs_(std::move(dirs)) {
        const Grid& g = *grid_;
        const size_t n = g.size();
        const size_t nl = dirs_.size();
        minus_.resize(n * nl);
        plus_.resize(n * nl);
        t0_.resize(n * nl);
        for (size_t node = 0; node < n; ++node) {
            const auto [i, j] = g.node(static_cast<int>(node));
            const Vec2 z = g.coord(static_cast<int>(node));
            for (size_t l = 0; l < nl; ++l) {
                const auto [p, q] = dirs_.lines[l];
                const double len = std::hypot(static_cast<double>(p), static_cast<double>(q));
                const Vec2 unit{p / len, q / len};
                plus_[node * nl + l] = make_arm(g, domain, datum, z, i + p, j + q, unit, len);
                minus_[node * nl + l] =
                    make_arm(g, domain, datum, z, i - p, j - q, {-unit.x, -unit.y}, len);
                const double sm = minus_[node * nl + l].s;
                const double sp = plus_[node * nl + l].s;
                t0_[node * nl + l] = sm / (sm + sp);
            }
        }
        resolve_caps(minus_, cap_s_minus_, cap_g_minus_);
        resolve_caps(plus_, cap_s_plus_, cap_g_plus_);
    }

    const GridPtr& grid() const { return grid_; }
    const DirectionSet& directions() const { return dirs_; }
    size_t line_count() const { return dirs_.size(); }

    const Arm& minus(size_t node, size_t line) const { return minus_[node * dirs_.size() + line]; }
    const Arm& plus(size_t node, size_t line) const { return plus_[node * dirs_.size() + line]; }
    double t0(size_t node, size_t line) const { return t0_[node * dirs_.size() + line]; }

    // Distance along the line from the node to the boundary exit on each
    // side, and the datum value there (the caps of the whole stencil line).
    double cap_s_minus(size_t node, size_t line) const { return cap_s_minus_[node * dirs_.size() + line]; }
    double cap_s_plus(size_t node, size_t line) const { return cap_s_plus_[node * dirs_.size() + line]; }
    double cap_g_minus(size_t node, size_t line) const { return cap_g_minus_[node * dirs_.size() + line]; }
    double cap_g_plus(size_t node, size_t line) const { return cap_g_plus_[node * dirs_.size() + line]; }

private:
    Arm make_arm(const Grid& g, const StrictlyConvexDomain& domain, const BoundaryDatum& datum,
                 Vec2 z, int i, int j, Vec2 unit, double len) {
        Arm arm;
        arm.node = g.find(i, j);
        if (arm.node >= 0) {
            arm.s = len * g.spacing();
            return arm;
        }
        const auto hit = domain.ray_exit(z, unit);
        arm.s = hit.distance;
        arm.exit = hit.point;
        arm.g = datum(domain, hit.point);
        if (!std::isfinite(arm.g))
            throw std::domain_error("build_arms: boundary datum is not finite at (" +
                                    std::to_string(hit.point.x) + ", " + std::to_string(hit.point.y) + ")");
        return arm;
    }

    // Accumulates arm links into per-side boundary-cap distances and values.
    void resolve_caps(const std::vector<Arm>& arms, std::vector<double>& cap_s,
                      std::vector<double>& cap_g) {
        const size_t nl = dirs_.size();
        const size_t n = grid_->size();
        cap_s.assign(n * nl, -1.0);
        cap_g.assign(n * nl, 0.0);
        std::vector<int> chain;
        for (size_t l = 0; l < nl; ++l) {
            for (size_t start = 0; start < n; ++start) {
                if (cap_s[start * nl + l] >= 0.0) continue;
                chain.clear();
                size_t cur = start;
                // follow links until a boundary arm or a resolved node
                while (true) {
                    const Arm& a = arms[cur * nl + l];
                    if (!a.interior()) {
                        cap_s[cur * nl + l] = a.s;
                        cap_g[cur * nl + l] = a.g;
                        break;
                    }
                    if (cap_s[static_cast<size_t>(a.node) * nl + l] >= 0.0) {
                        cap_s[cur * nl + l] = cap_s[static_cast<size_t>(a.node) * nl + l] + a.s;
                        cap_g[cur * nl + l] = cap_g[static_cast<size_t>(a.node) * nl + l];
                        break;
                    }
                    chain.push_back(static_cast<int>(cur));
                    cur = static_cast<size_t>(a.node);
                }
                for (size_t k = chain.size(); k-- > 0;) {
                    const size_t node = static_cast<size_t>(chain[k]);
                    const Arm& a = arms[node * nl + l];
                    const size_t next = static_cast<size_t>(a.node);
                    cap_s[node * nl + l] = cap_s[next * nl + l] + a.s;
                    cap_g[node * nl + l] = cap_g[next * nl + l];
                }
            }
        }
    }

    GridPtr grid_;
    DirectionSet dirs_;
    std::vector<Arm> minus_;
    std::vector<Arm> plus_;
    std::vector<double> t0_;
    std::vector<double> cap_s_minus_;
    std::vector<double> cap_s_plus_;
    std::vector<double> cap_g_minus_;
    std::vector<double> cap_g_plus_;
};

inline ArmTable build_arms(GridPtr grid, const StrictlyConvexDomain& domain,
                           const BoundaryDatum& datum, const DirectionSet& dirs) {
    return ArmTable(std::move(grid), domain, datum, dirs);
}

}  // namespace alphaconv
