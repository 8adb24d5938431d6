#pragma once

// Verification and post-processing over converged fields: discrete
// alpha-convexity certification, supporting alpha-hyperplane extraction
// with a touch certificate, Lipschitz and C^1 diagnostics, the monotone
// composition criterion, and exact field comparison.  Everything here is
// read-only over immutable fields.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "alphaconv/envelope.hpp"
#include "alphaconv/expr.hpp"
#include "alphaconv/lattice.hpp"
#include "alphaconv/scalar.hpp"

namespace alphaconv {

struct Violation {
    int node = -1;
    int line = -1;
    double chord = 0.0;
    double value = 0.0;
    double deficit = 0.0;  // value - chord, > tol
};

struct ViolationReport {
    std::vector<Violation> entries;
    double worst = 0.0;

    bool empty() const { return entries.empty(); }
};

// Tests u(z) <= chord value + tol on every node and stencil line; an empty
// report certifies discrete alpha-convexity.
inline ViolationReport check_alpha_convex(const Field& field, const Alpha& alpha,
                                          const ArmTable& arms, double tol) {
    ViolationReport rep;
    const size_t nl = arms.line_count();
    for (size_t n = 0; n < field.size(); ++n) {
        for (size_t l = 0; l < nl; ++l) {
            const Arm& am = arms.minus(n, l);
            const Arm& ap = arms.plus(n, l);
            const double a = am.interior() ? field[am.node] : am.g;
            const double b = ap.interior() ? field[ap.node] : ap.g;
            const double chord = chord_update(alpha, a, b, arms.t0(n, l));
            const double deficit = field[n] - chord;
            if (deficit > tol) {
                rep.entries.push_back({static_cast<int>(n), static_cast<int>(l), chord, field[n], deficit});
                rep.worst = std::max(rep.worst, deficit);
            }
        }
    }
    return rep;
}

// Per-node gradient estimate: centered differences where both axis
// neighbours are interior, one-sided next to the boundary, zero where no
// axis neighbour exists.
inline std::vector<Vec2> gradient(const Field& field) {
    const Grid& g = *field.grid;
    const double h = g.spacing();
    std::vector<Vec2> out(field.size());
    for (size_t n = 0; n < field.size(); ++n) {
        const auto [i, j] = g.node(static_cast<int>(n));
        auto diff = [&](int ip, int jp, int im, int jm) {
            const int np = g.find(ip, jp);
            const int nm = g.find(im, jm);
            if (np >= 0 && nm >= 0) return (field[np] - field[nm]) / (2.0 * h);
            if (np >= 0) return (field[np] - field[n]) / h;
            if (nm >= 0) return (field[n] - field[nm]) / h;
            return 0.0;
        };
        out[n].x = diff(i + 1, j, i - 1, j);
        out[n].y = diff(i, j + 1, i, j - 1);
    }
    return out;
}

// Function of one linear coordinate t = <z - base, nu> solving the 1-D
// equation: value0 + ln(1 + C t)/K for alpha in (0,1), value0 + C t in the
// affine limit.  Defined on t > -1/C when C > 0, everywhere otherwise.
struct AlphaHyperplane {
    Vec2 base{};
    Vec2 nu{};
    double value0 = 0.0;
    double slope_c = 0.0;
    Alpha alpha;

    double coordinate(Vec2 z) const { return (z - base).dot(nu); }

    bool defined_at(Vec2 z, double margin = 0.0) const {
        if (alpha.affine_limit() || slope_c == 0.0) return true;
        return coordinate(z) > -1.0 / slope_c + margin;
    }

    double value(Vec2 z) const {
        const double t = coordinate(z);
        if (alpha.affine_limit()) return value0 + slope_c * t;
        if (slope_c == 0.0) return value0;
        return value0 + std::log1p(slope_c * t) / alpha.k;
    }
};

struct HyperplaneCertificate {
    AlphaHyperplane plane;
    double max_gap = 0.0;   // max over admissible nodes of plane - field
    double base_gap = 0.0;  // plane - field at the base node (0 by construction)
    int worst_node = -1;
};

// Supporting alpha-hyperplane at a node: direction nu from the discrete
// gradient, first derivative matched to |grad u| (C = K |grad u|), and the
// signed touch gap reported over all nodes on the admissible half-plane
// shifted in by delta_margin.
inline HyperplaneCertificate support_hyperplane(const Field& field, const Alpha& alpha, int node,
                                                double delta_margin) {
    if (alpha.quasiconvex_limit())
        throw std::domain_error("support_hyperplane: requires alpha in (0,1]");
    const Grid& g = *field.grid;
    const std::vector<Vec2> grad = gradient(field);

    HyperplaneCertificate cert;
    cert.plane.base = g.coord(node);
    cert.plane.value0 = field[node];
    cert.plane.alpha = alpha;
    const Vec2 dz = grad[node];
    const double mag = dz.norm();
    if (mag == 0.0) {
        cert.plane.nu = {1.0, 0.0};
        cert.plane.slope_c = 0.0;
    } else {
        cert.plane.nu = dz * (1.0 / mag);
        cert.plane.slope_c = alpha.affine_limit() ? mag : alpha.k * mag;
    }

    cert.base_gap = cert.plane.value(cert.plane.base) - field[node];
    for (size_t n = 0; n < field.size(); ++n) {
        const Vec2 z = g.coord(static_cast<int>(n));
        if (!cert.plane.defined_at(z, delta_margin)) continue;
        const double gap = cert.plane.value(z) - field[n];
        if (gap > cert.max_gap) {
            cert.max_gap = gap;
            cert.worst_node = static_cast<int>(n);
        }
    }
    return cert;
}

// Max |du| / distance over stencil-adjacent node pairs (axis and diagonal
// neighbours), restricted to nodes farther than 4h from the boundary.
inline double lipschitz_estimate(const Field& field, const StrictlyConvexDomain& domain) {
    const Grid& g = *field.grid;
    const double h = g.spacing();

    // Euclidean boundary distance, approximated on a dense boundary sample.
    std::vector<Vec2> bnd;
    const int nb = 256;
    const double two_pi = 2.0 * std::acos(-1.0);
    bnd.reserve(nb);
    for (int k = 0; k < nb; ++k) bnd.push_back(domain.boundary_point(two_pi * k / nb));
    auto boundary_distance = [&](Vec2 z) {
        double d = std::numeric_limits<double>::infinity();
        for (const Vec2& p : bnd) d = std::min(d, (z - p).norm());
        return d;
    };

    std::vector<char> deep(field.size(), 0);
    for (size_t n = 0; n < field.size(); ++n)
        deep[n] = boundary_distance(g.coord(static_cast<int>(n))) > 4.0 * h;

    static constexpr int kOff[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
    double lip = 0.0;
    for (size_t n = 0; n < field.size(); ++n) {
        if (!deep[n]) continue;
        const auto [i, j] = g.node(static_cast<int>(n));
        for (const auto& d : kOff) {
            const int nn = g.find(i + d[0], j + d[1]);
            if (nn < 0 || !deep[nn]) continue;
            const double dist = h * std::hypot(static_cast<double>(d[0]), static_cast<double>(d[1]));
            lip = std::max(lip, std::abs(field[nn] - field[n]) / dist);
        }
    }
    return lip;
}

struct GradientJump {
    double separation = 0.0;
    double max_jump = 0.0;
};

// For r in {2h, 4h, 8h}: max gradient difference over pairs of nodes at
// distance <= r whose gradients are fully centered.  A jump profile that
// decreases under grid refinement is the (qualitative) C^1 diagnostic.
inline std::vector<GradientJump> c1_diagnostic(const Field& field) {
    const Grid& g = *field.grid;
    const double h = g.spacing();
    const std::vector<Vec2> grad = gradient(field);

    std::vector<char> centered(field.size(), 0);
    for (size_t n = 0; n < field.size(); ++n) {
        const auto [i, j] = g.node(static_cast<int>(n));
        centered[n] = g.find(i + 1, j) >= 0 && g.find(i - 1, j) >= 0 && g.find(i, j + 1) >= 0 &&
                      g.find(i, j - 1) >= 0;
    }

    std::vector<GradientJump> out;
    for (int mult : {2, 4, 8}) {
        const double r = mult * h;
        double worst = 0.0;
        for (size_t n = 0; n < field.size(); ++n) {
            if (!centered[n]) continue;
            const auto [i, j] = g.node(static_cast<int>(n));
            for (int dj = 0; dj <= mult; ++dj) {
                for (int di = (dj == 0 ? 1 : -mult); di <= mult; ++di) {
                    if (di * di + dj * dj > mult * mult) continue;
                    const int nn = g.find(i + di, j + dj);
                    if (nn < 0 || !centered[nn]) continue;
                    worst = std::max(worst, (grad[nn] - grad[n]).norm());
                }
            }
        }
        out.push_back({r, worst});
    }
    return out;
}

// Samples f' >= 0 and alpha f'' + (1-alpha)((f')^2 - f') >= -1e-12 on 1e4
// points of [s_lo, s_hi]; true iff every sample passes.  The derivative
// expressions are evaluated with x bound to s.
inline bool check_composition(const Alpha& alpha, const Expression& df, const Expression& d2f,
                              double s_lo, double s_hi) {
    if (!(s_lo <= s_hi)) throw std::domain_error("check_composition: empty range");
    const int n = 10000;
    for (int k = 0; k < n; ++k) {
        const double s = s_lo + (s_hi - s_lo) * k / (n - 1.0);
        const double f1 = df.eval(s, 0.0, 0.0);
        const double f2 = d2f.eval(s, 0.0, 0.0);
        if (!(f1 >= 0.0)) return false;
        if (!(alpha.value * f2 + (1.0 - alpha.value) * (f1 * f1 - f1) >= -1e-12)) return false;
    }
    return true;
}

struct FieldComparison {
    double sup_diff = 0.0;
    bool first_le_second = true;
    bool second_le_first = true;
};

inline FieldComparison compare_fields(const Field& f1, const Field& f2, double tol = 1e-9) {
    if (!f1.grid || !f2.grid || !f1.grid->same_layout(*f2.grid))
        throw std::domain_error("compare_fields: fields live on different grids");
    FieldComparison cmp;
    for (size_t n = 0; n < f1.size(); ++n) {
        const double d = f1[n] - f2[n];
        cmp.sup_diff = std::max(cmp.sup_diff, std::abs(d));
        if (d > tol) cmp.first_le_second = false;
        if (d < -tol) cmp.second_le_first = false;
    }
    return cmp;
}

}  // namespace alphaconv
