#pragma once

// Independent brute-force references used to validate the solver:
//   - convex_envelope_oracle: minimum over boundary-sample pairs/triples
//     whose hull contains the query (the defining Caratheodory form,
//     O(m^3) per query);
//   - convex_envelope_lp: the same value as the maximal affine minorant,
//     via a randomized-incremental 3-variable LP (fast enough to query
//     every grid node at m = 1024);
//   - quasiconvex_envelope_oracle: smallest sampled level whose sublevel
//     hull contains the query, by binary search with orientation tests;
//   - fixed_point_oracle: an independent Jacobi relaxation of the chord-min
//     operator on tiny grids.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "alphaconv/envelope.hpp"
#include "alphaconv/geometry.hpp"
#include "alphaconv/lattice.hpp"
#include "alphaconv/scalar.hpp"

namespace alphaconv {

struct BoundarySampling {
    std::vector<Vec2> points;
    std::vector<double> theta;
    std::vector<double> g;

    size_t size() const { return points.size(); }
};

inline BoundarySampling sample_boundary(const StrictlyConvexDomain& domain,
                                        const BoundaryDatum& datum, int m) {
    if (m < 16) throw std::domain_error("sample_boundary: need at least 16 samples");
    BoundarySampling s;
    s.points.reserve(m);
    s.theta.reserve(m);
    s.g.reserve(m);
    const double two_pi = 2.0 * std::acos(-1.0);
    for (int k = 0; k < m; ++k) {
        const double th = two_pi * k / m;
        const Vec2 p = domain.boundary_point(th);
        const double v = datum.expression().eval(p.x, p.y, th);
        if (!std::isfinite(v)) throw std::domain_error("sample_boundary: datum not finite");
        s.points.push_back(p);
        s.theta.push_back(th);
        s.g.push_back(v);
    }
    return s;
}

// Reference convex envelope value at z: minimum of the affine interpolation
// over all sample pairs (within collinearity tolerance 1e-10) and triples
// whose hull contains z.
inline double convex_envelope_oracle(const BoundarySampling& s, Vec2 z) {
    const size_t m = s.size();
    double best = std::numeric_limits<double>::infinity();

    for (size_t i = 0; i < m; ++i) {
        for (size_t j = i + 1; j < m; ++j) {
            const Vec2 v = s.points[j] - s.points[i];
            const Vec2 w = z - s.points[i];
            const double len2 = v.dot(v);
            if (std::abs(v.cross(w)) > 1e-10 * std::sqrt(len2)) continue;
            const double t = w.dot(v) / len2;
            if (t < -1e-12 || t > 1.0 + 1e-12) continue;
            best = std::min(best, s.g[i] + t * (s.g[j] - s.g[i]));
        }
    }
    for (size_t i = 0; i < m; ++i) {
        const Vec2 p1 = s.points[i];
        for (size_t j = i + 1; j < m; ++j) {
            const Vec2 d2 = s.points[j] - p1;
            for (size_t k = j + 1; k < m; ++k) {
                const Vec2 d3 = s.points[k] - p1;
                const double denom = d2.cross(d3);
                if (std::abs(denom) <= 1e-12) continue;
                const Vec2 w = z - p1;
                const double l2 = w.cross(d3) / denom;
                const double l3 = d2.cross(w) / denom;
                const double l1 = 1.0 - l2 - l3;
                if (l1 < -1e-12 || l2 < -1e-12 || l3 < -1e-12) continue;
                best = std::min(best, l1 * s.g[i] + l2 * s.g[j] + l3 * s.g[k]);
            }
        }
    }
    if (!std::isfinite(best))
        throw std::runtime_error("convex_envelope_oracle: query not covered by any sample triple");
    return best;
}

namespace lpdet {

struct Row2 {
    double au, av, b;
};

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// maximize c*t subject to au*t <= b rows and t in [lo, hi].
inline double lp1(double c, const std::vector<Row2>& rows, double lo, double hi) {
    for (const Row2& row : rows) {
        const double a = row.au;
        const double b = row.b;
        if (std::abs(a) < 1e-14) {
            if (b < -1e-9) throw std::runtime_error("lp: infeasible 1-d row");
            continue;
        }
        if (a > 0.0)
            hi = std::min(hi, b / a);
        else
            lo = std::max(lo, b / a);
    }
    if (lo > hi) {
        if (lo - hi > 1e-7) throw std::runtime_error("lp: empty 1-d interval");
        return 0.5 * (lo + hi);
    }
    return c >= 0.0 ? hi : lo;
}

// maximize cu*u + cv*v subject to rows and the box [-M, M]^2.
inline std::pair<double, double> lp2(double cu, double cv, const std::vector<Row2>& rows,
                                     double M) {
    double u = cu >= 0.0 ? M : -M;
    double v = cv >= 0.0 ? M : -M;
    std::vector<Row2> sub;
    sub.reserve(rows.size() + 2);
    for (size_t k = 0; k < rows.size(); ++k) {
        const Row2& rk = rows[k];
        if (rk.au * u + rk.av * v <= rk.b + 1e-9 * (1.0 + std::abs(rk.b))) continue;
        if (std::abs(rk.au) < 1e-14 && std::abs(rk.av) < 1e-14) {
            if (rk.b < -1e-9) throw std::runtime_error("lp: infeasible 2-d row");
            continue;
        }
        // Solve on the line rk.au*u + rk.av*v = rk.b, eliminating the
        // larger coefficient.
        sub.clear();
        const bool elim_u = std::abs(rk.au) >= std::abs(rk.av);
        const double ae = elim_u ? rk.au : rk.av;  // eliminated coefficient
        const double ao = elim_u ? rk.av : rk.au;  // remaining coefficient
        // eliminated variable = (b - ao * t) / ae, free variable t.
        double c1 = (elim_u ? cv : cu) - (elim_u ? cu : cv) * ao / ae;
        for (size_t r = 0; r < k; ++r) {
            const Row2& rr = rows[r];
            const double re = elim_u ? rr.au : rr.av;
            const double ro = elim_u ? rr.av : rr.au;
            sub.push_back({ro - re * ao / ae, 0.0, rr.b - re * rk.b / ae});
        }
        // Box of the eliminated variable: |(b - ao t)/ae| <= M.
        sub.push_back({-ao / ae, 0.0, M - rk.b / ae});
        sub.push_back({ao / ae, 0.0, M + rk.b / ae});
        const double t = lp1(c1, sub, -M, M);
        const double e = (rk.b - ao * t) / ae;
        u = elim_u ? e : t;
        v = elim_u ? t : e;
    }
    return {u, v};
}

}  // namespace lpdet

// Convex envelope value as the maximal affine minorant of the samples:
// maximize l(z) over planes l with l(p_k) <= g_k.  Identical quantity to
// convex_envelope_oracle (lower-hull face through z), evaluated by a
// Seidel-style incremental LP in the three plane coefficients.  The
// constraint shuffle is seeded from the query point, so results are
// deterministic.
inline double convex_envelope_lp(const BoundarySampling& s, Vec2 z) {
    const size_t m = s.size();
    double gmax = 0.0;
    for (double v : s.g) gmax = std::max(gmax, std::abs(v));
    const double M = 1e4 * (1.0 + gmax);

    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    uint64_t state = lpdet::splitmix64(std::bit_cast<uint64_t>(z.x)) ^
                     lpdet::splitmix64(~std::bit_cast<uint64_t>(z.y));
    for (size_t i = m; i > 1; --i) {
        state = lpdet::splitmix64(state);
        std::swap(order[i - 1], order[state % i]);
    }

    // Variables (c0, c1, c2): plane value c0 + c1 x + c2 y.
    const double cx = z.x, cy = z.y;
    double x0 = M, x1 = cx >= 0.0 ? M : -M, x2 = cy >= 0.0 ? M : -M;
    std::vector<lpdet::Row2> sub;
    sub.reserve(m + 2);
    for (size_t k = 0; k < m; ++k) {
        const int idx = order[k];
        const double a1 = s.points[idx].x, a2 = s.points[idx].y, b = s.g[idx];
        if (x0 + a1 * x1 + a2 * x2 <= b + 1e-9 * (1.0 + std::abs(b))) continue;
        // Solve on the plane c0 + a1 c1 + a2 c2 = b; c0 has unit coefficient,
        // eliminate it: c0 = b - a1 c1 - a2 c2.
        sub.clear();
        for (size_t r = 0; r < k; ++r) {
            const int ri = order[r];
            sub.push_back({s.points[ri].x - a1, s.points[ri].y - a2, s.g[ri] - b});
        }
        sub.push_back({-a1, -a2, M - b});  // c0 <= M
        sub.push_back({a1, a2, M + b});    // -c0 <= M
        auto [u, v] = lpdet::lp2(cx - a1, cy - a2, sub, M);
        x1 = u;
        x2 = v;
        x0 = b - a1 * x1 - a2 * x2;
    }
    const double value = x0 + cx * x1 + cy * x2;
    if (!(value <= gmax + 1.0))
        throw std::runtime_error("convex_envelope_lp: query outside the sample hull");
    return value;
}

// Quasiconvex envelope value at z: the smallest sampled level lambda such
// that z lies in the convex hull of the samples with g <= lambda.  The
// predicate is monotone in the level, so a binary search over the g-sorted
// prefix suffices; hull membership uses signed-area orientation tests.
class QuasiconvexEnvelopeOracle {
public:
    explicit QuasiconvexEnvelopeOracle(BoundarySampling s) : s_(std::move(s)) {
        const size_t m = s_.size();
        by_g_.resize(m);
        std::iota(by_g_.begin(), by_g_.end(), 0);
        std::stable_sort(by_g_.begin(), by_g_.end(),
                         [&](int a, int b) { return s_.g[a] < s_.g[b]; });
        by_x_.resize(m);
        std::iota(by_x_.begin(), by_x_.end(), 0);
        std::sort(by_x_.begin(), by_x_.end(), [&](int a, int b) {
            if (s_.points[a].x != s_.points[b].x) return s_.points[a].x < s_.points[b].x;
            return s_.points[a].y < s_.points[b].y;
        });
        rank_.resize(m);
        for (size_t r = 0; r < m; ++r) rank_[by_g_[r]] = static_cast<int>(r);
    }

    double value(Vec2 z) const {
        const size_t m = s_.size();
        if (!prefix_contains(m, z))
            throw std::runtime_error("quasiconvex oracle: query outside the full sample hull");
        size_t lo = 1, hi = m;
        while (lo < hi) {
            const size_t mid = lo + (hi - lo) / 2;
            if (prefix_contains(mid, z))
                hi = mid;
            else
                lo = mid + 1;
        }
        return s_.g[by_g_[lo - 1]];
    }

    double operator()(Vec2 z) const { return value(z); }

private:
    // Does the hull of the k lowest-level samples contain z (inclusive)?
    bool prefix_contains(size_t k, Vec2 z) const {
        hull_buf_.clear();
        for (int idx : by_x_)
            if (rank_[idx] < static_cast<int>(k)) hull_buf_.push_back(idx);
        const size_t n = hull_buf_.size();
        if (n == 1) return (z - s_.points[hull_buf_[0]]).norm() <= 1e-12;
        if (n == 2) return on_segment(s_.points[hull_buf_[0]], s_.points[hull_buf_[1]], z);

        // Monotone chain on the x-sorted subset.
        lower_.clear();
        upper_.clear();
        for (size_t i = 0; i < n; ++i) {
            const Vec2 p = s_.points[hull_buf_[i]];
            while (lower_.size() >= 2 &&
                   (lower_[lower_.size() - 1] - lower_[lower_.size() - 2])
                           .cross(p - lower_[lower_.size() - 2]) <= 0.0)
                lower_.pop_back();
            lower_.push_back(p);
        }
        for (size_t i = n; i-- > 0;) {
            const Vec2 p = s_.points[hull_buf_[i]];
            while (upper_.size() >= 2 &&
                   (upper_[upper_.size() - 1] - upper_[upper_.size() - 2])
                           .cross(p - upper_[upper_.size() - 2]) <= 0.0)
                upper_.pop_back();
            upper_.push_back(p);
        }
        if (lower_.size() + upper_.size() <= 4 && collinear_set(n))
            return on_polyline(z);
        lower_.pop_back();
        upper_.pop_back();
        lower_.insert(lower_.end(), upper_.begin(), upper_.end());
        const std::vector<Vec2>& poly = lower_;
        const size_t np = poly.size();
        for (size_t i = 0; i < np; ++i) {
            const Vec2 a = poly[i];
            const Vec2 b = poly[(i + 1) % np];
            if ((b - a).cross(z - a) < -1e-12) return false;
        }
        return true;
    }

    bool collinear_set(size_t n) const {
        const Vec2 a = s_.points[hull_buf_[0]];
        const Vec2 b = s_.points[hull_buf_[n - 1]];
        for (size_t i = 1; i + 1 < n; ++i)
            if (std::abs((b - a).cross(s_.points[hull_buf_[i]] - a)) > 1e-12) return false;
        return true;
    }

    bool on_polyline(Vec2 z) const {
        return on_segment(s_.points[hull_buf_.front()], s_.points[hull_buf_.back()], z);
    }

    static bool on_segment(Vec2 a, Vec2 b, Vec2 z) {
        const Vec2 v = b - a;
        const double len2 = v.dot(v);
        if (len2 == 0.0) return (z - a).norm() <= 1e-12;
        if (std::abs(v.cross(z - a)) > 1e-12 * std::sqrt(len2)) return false;
        const double t = (z - a).dot(v) / len2;
        return t >= -1e-12 && t <= 1.0 + 1e-12;
    }

    BoundarySampling s_;
    std::vector<int> by_g_;
    std::vector<int> by_x_;
    std::vector<int> rank_;
    mutable std::vector<int> hull_buf_;
    mutable std::vector<Vec2> lower_, upper_;
};

inline double quasiconvex_envelope_oracle(const BoundarySampling& s, Vec2 z) {
    return QuasiconvexEnvelopeOracle(s).value(z);
}

// Independent Jacobi relaxation of the chord-min operator on a small grid,
// from the same constant upper barrier, run to sweep delta <= 1e-14.
inline Field fixed_point_oracle(const StrictlyConvexDomain& domain, const BoundaryDatum& g,
                                const Alpha& alpha, double h, int width) {
    GridPtr grid = build_grid(domain, h);
    if (grid->size() > 200)
        throw std::domain_error("fixed_point_oracle: grid exceeds the 200-node budget");
    const ArmTable arms = build_arms(grid, domain, g, build_directions(width));
    const size_t n = grid->size();
    const size_t nl = arms.line_count();

    std::vector<double> u(n, boundary_range(domain, g).second + 1e-6);
    std::vector<double> next(n);

    auto chain_min = [&](const std::vector<double>& vals, size_t node, size_t line, bool plus) {
        double m = std::numeric_limits<double>::infinity();
        size_t cur = node;
        for (;;) {
            const Arm& a = plus ? arms.plus(cur, line) : arms.minus(cur, line);
            if (!a.interior()) return std::min(m, a.g);
            m = std::min(m, vals[a.node]);
            cur = static_cast<size_t>(a.node);
        }
    };

    for (int it = 0; it < 1000000; ++it) {
        double delta = 0.0;
        for (size_t node = 0; node < n; ++node) {
            double best = u[node];
            for (size_t l = 0; l < nl; ++l) {
                double cand;
                if (alpha.quasiconvex_limit()) {
                    cand = std::max(chain_min(u, node, l, false), chain_min(u, node, l, true));
                } else {
                    const Arm& am = arms.minus(node, l);
                    const Arm& ap = arms.plus(node, l);
                    cand = chord_value(alpha, am.interior() ? u[am.node] : am.g,
                                       ap.interior() ? u[ap.node] : ap.g, arms.t0(node, l));
                }
                best = std::min(best, cand);
            }
            next[node] = best;
            delta = std::max(delta, u[node] - best);
        }
        u.swap(next);
        if (delta <= 1e-14) break;
    }

    Field f;
    f.grid = std::move(grid);
    f.values = std::move(u);
    return f;
}

}  // namespace alphaconv
