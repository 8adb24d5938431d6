#pragma once

// Fixed-point solver for the discrete alpha-convex envelope: the largest
// grid field below the boundary datum satisfying the chord inequality on
// every stencil line.  The iteration starts from a constant upper barrier
// (max of g plus a margin) and relaxes u(z) <- min(u(z), best chord value),
// so every iterate is an upper bound and the sequence is node-wise
// non-increasing.
//
// alpha > 0 relaxes each line against the one-step arm chord plus implied
// longer chords (see best_line_value).  alpha = 0 (max chords) is special:
// ties freeze a one-step iteration on plateaus, so each line is relaxed
// against max(min over the minus side chain, min over the plus side chain),
// both sides including the boundary cap, which enforces the chord
// inequality for every endpoint pair along the stencil line at once.

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "alphaconv/lattice.hpp"
#include "alphaconv/scalar.hpp"

namespace alphaconv {

struct Field {
    GridPtr grid;
    std::vector<double> values;

    double& operator[](size_t n) { return values[n]; }
    double operator[](size_t n) const { return values[n]; }
    size_t size() const { return values.size(); }
};

enum class SweepOrder { ForwardRow, BackwardRow, ForwardColumn, BackwardColumn };
enum class IterationMode { GaussSeidel, Jacobi };

inline constexpr int kBoundarySampleCount = 4096;

// Extremes of g over a uniform 4096-point boundary sample.
inline std::pair<double, double> boundary_range(const StrictlyConvexDomain& domain,
                                                const BoundaryDatum& g,
                                                int samples = kBoundarySampleCount) {
    const double two_pi = 2.0 * std::acos(-1.0);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int k = 0; k < samples; ++k) {
        const double v = g.at_theta(domain, two_pi * k / samples);
        if (!std::isfinite(v))
            throw std::domain_error("boundary datum is not finite on the boundary sample");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

// Constant upper barrier: max of g over the boundary sample plus a margin.
inline Field init_field(GridPtr grid, const StrictlyConvexDomain& domain, const BoundaryDatum& g) {
    const double top = boundary_range(domain, g).second + 1e-6;
    Field f;
    f.values.assign(grid->size(), top);
    f.grid = std::move(grid);
    return f;
}

// Value at the node of the 1-D solution through the two arm values.
inline double chord_update(const Alpha& alpha, double u_minus, double u_plus, double t0) {
    return chord_value(alpha, u_minus, u_plus, t0);
}

namespace envdet {

// Chain minimum on one side of a line: walk arm links away from the node
// until the boundary cap, taking the minimum of the visited values and the
// cap.  `arm_of` picks the minus or plus arm.
template <typename ArmOf>
inline double side_min(const std::vector<double>& u, size_t node, size_t line, ArmOf arm_of) {
    double m = std::numeric_limits<double>::infinity();
    size_t cur = node;
    for (;;) {
        const Arm& a = arm_of(cur, line);
        if (!a.interior()) return std::min(m, a.g);
        m = std::min(m, u[a.node]);
        cur = static_cast<size_t>(a.node);
    }
}

// Best chord value over all stencil lines through `node`, reading arm
// values from `u`.  Besides the one-step arm chord, each line also relaxes
// against same-line chords of dyadic length and against the chord between
// the two boundary caps of the whole line.  Those constraints are implied
// at the fixed point (chord inequalities compose along a line by the
// scaling identity and 1-D comparison), so the fixed point is unchanged,
// but information crosses the grid at every scale and the contraction
// rate stops degenerating with the node count.
inline double best_line_value(const std::vector<double>& u, const Alpha& alpha,
                              const ArmTable& arms, size_t node) {
    const size_t nl = arms.line_count();
    double best = std::numeric_limits<double>::infinity();
    if (alpha.quasiconvex_limit()) {
        for (size_t l = 0; l < nl; ++l) {
            const double m_minus = side_min(u, node, l,
                [&](size_t c, size_t ll) -> const Arm& { return arms.minus(c, ll); });
            const double m_plus = side_min(u, node, l,
                [&](size_t c, size_t ll) -> const Arm& { return arms.plus(c, ll); });
            best = std::min(best, std::max(m_minus, m_plus));
        }
        return best;
    }
    const Grid& grid = *arms.grid();
    const auto [ni, nj] = grid.node(static_cast<int>(node));
    for (size_t l = 0; l < nl; ++l) {
        const Arm& am = arms.minus(node, l);
        const Arm& ap = arms.plus(node, l);
        const double a = am.interior() ? u[am.node] : am.g;
        const double b = ap.interior() ? u[ap.node] : ap.g;
        best = std::min(best, chord_value(alpha, a, b, arms.t0(node, l)));
        if (!am.interior() && !ap.interior()) continue;

        const auto [p, q] = arms.directions().lines[l];
        const double step = am.interior() ? am.s : ap.s;  // |d| h
        const double sm_cap = arms.cap_s_minus(node, l);
        const double sp_cap = arms.cap_s_plus(node, l);
        const double gm_cap = arms.cap_g_minus(node, l);
        const double gp_cap = arms.cap_g_plus(node, l);
        for (int k = 2;; k *= 2) {
            const int im = grid.find(ni - k * p, nj - k * q);
            const int ip = grid.find(ni + k * p, nj + k * q);
            if (im < 0 && ip < 0) break;
            const double s_span = k * step;
            const double sm = im >= 0 ? s_span : sm_cap;
            const double sp = ip >= 0 ? s_span : sp_cap;
            const double va = im >= 0 ? u[im] : gm_cap;
            const double vb = ip >= 0 ? u[ip] : gp_cap;
            best = std::min(best, chord_value(alpha, va, vb, sm / (sm + sp)));
        }
        best = std::min(best, chord_value(alpha, gm_cap, gp_cap, sm_cap / (sm_cap + sp_cap)));
    }
    return best;
}

inline void order_indices(const Grid& grid, SweepOrder order, std::vector<int>& out) {
    const int n = static_cast<int>(grid.size());
    out.resize(n);
    switch (order) {
        case SweepOrder::ForwardRow:
            for (int k = 0; k < n; ++k) out[k] = k;
            break;
        case SweepOrder::BackwardRow:
            for (int k = 0; k < n; ++k) out[k] = n - 1 - k;
            break;
        case SweepOrder::ForwardColumn:
            out = grid.column_major_order();
            break;
        case SweepOrder::BackwardColumn:
            out = grid.column_major_order();
            std::reverse(out.begin(), out.end());
            break;
    }
}

}  // namespace envdet

// One in-place Gauss-Seidel pass in the given node order; returns the
// maximum absolute change.
inline double sweep(Field& field, const Alpha& alpha, const ArmTable& arms, SweepOrder order) {
    std::vector<int> idx;
    envdet::order_indices(*field.grid, order, idx);
    double delta = 0.0;
    for (int n : idx) {
        const double old = field.values[n];
        const double cand = envdet::best_line_value(field.values, alpha, arms, n);
        if (cand < old) {
            field.values[n] = cand;
            delta = std::max(delta, old - cand);
        }
    }
    return delta;
}

// One Jacobi pass: all updates read the previous iterate.
inline double jacobi_sweep(Field& field, const Alpha& alpha, const ArmTable& arms) {
    const std::vector<double> prev = field.values;
    double delta = 0.0;
    for (size_t n = 0; n < prev.size(); ++n) {
        const double cand = envdet::best_line_value(prev, alpha, arms, n);
        if (cand < prev[n]) {
            field.values[n] = cand;
            delta = std::max(delta, prev[n] - cand);
        }
    }
    return delta;
}

struct EnvelopeResult {
    Field field;
    Alpha alpha;
    double h = 0.0;
    int width = 0;
    double tol = 0.0;
    int iterations = 0;
    double last_sweep_delta = 0.0;
    double residual_max = 0.0;
    bool converged = false;
};

struct ResidualReport {
    Field r;
    double max_abs = 0.0;
};

// Per node, the signed gap between the best one-step chord value and the
// field: r(z) = min over lines of chord_update(arm values) - u(z).  At the
// discrete envelope r is ~0 from below: r >= -tol is the alpha-convexity
// side, r <= the interpolation gap is the supersolution side.
inline ResidualReport residual(const Field& field, const Alpha& alpha, const ArmTable& arms) {
    ResidualReport rep;
    rep.r.grid = field.grid;
    rep.r.values.resize(field.size());
    const size_t nl = arms.line_count();
    for (size_t n = 0; n < field.size(); ++n) {
        double best = std::numeric_limits<double>::infinity();
        for (size_t l = 0; l < nl; ++l) {
            const Arm& am = arms.minus(n, l);
            const Arm& ap = arms.plus(n, l);
            const double a = am.interior() ? field[am.node] : am.g;
            const double b = ap.interior() ? field[ap.node] : ap.g;
            best = std::min(best, chord_update(alpha, a, b, arms.t0(n, l)));
        }
        const double r = best - field.values[n];
        rep.r.values[n] = r;
        rep.max_abs = std::max(rep.max_abs, std::abs(r));
    }
    return rep;
}

// Relax a prepared initial field to the fixed point over the given arms.
// Stops once the sweep delta is below tol AND the geometric tail estimate
// delta * r/(1-r) (r = observed delta ratio) is below tol as well, so a
// converged field sits within about tol of the fixed point, not merely
// within tol per sweep.
inline EnvelopeResult solve_on(const ArmTable& arms, Field init, const Alpha& alpha, double tol,
                               int max_iter, IterationMode mode = IterationMode::GaussSeidel) {
    if (!(tol > 0.0)) throw std::domain_error("solve_envelope: tol must be positive");
    if (max_iter < 1) throw std::domain_error("solve_envelope: max_iter must be >= 1");
    static constexpr SweepOrder kCycle[4] = {SweepOrder::ForwardRow, SweepOrder::BackwardRow,
                                             SweepOrder::ForwardColumn, SweepOrder::BackwardColumn};
    EnvelopeResult res;
    res.field = std::move(init);
    res.alpha = alpha;
    res.h = res.field.grid->spacing();
    res.width = arms.directions().width;
    res.tol = tol;
    double prev_delta = -1.0;
    double ratio = 0.5;
    for (int it = 0; it < max_iter; ++it) {
        const double delta = (mode == IterationMode::GaussSeidel)
                                 ? sweep(res.field, alpha, arms, kCycle[it % 4])
                                 : jacobi_sweep(res.field, alpha, arms);
        res.iterations = it + 1;
        res.last_sweep_delta = delta;
        if (prev_delta > 0.0) ratio = std::clamp(delta / prev_delta, 0.0, 0.995);
        prev_delta = delta;
        const double tail = delta * ratio / (1.0 - ratio);
        if (delta <= tol && (delta == 0.0 || tail <= tol)) {
            res.converged = true;
            break;
        }
    }
    res.residual_max = residual(res.field, alpha, arms).max_abs;
    return res;
}

inline EnvelopeResult solve_envelope(const StrictlyConvexDomain& domain, const BoundaryDatum& g,
                                     const Alpha& alpha, double h, int width, double tol,
                                     int max_iter,
                                     IterationMode mode = IterationMode::GaussSeidel) {
    GridPtr grid = build_grid(domain, h);
    const ArmTable arms = build_arms(grid, domain, g, build_directions(width));
    Field u0 = init_field(grid, domain, g);
    return solve_on(arms, std::move(u0), alpha, tol, max_iter, mode);
}

// Solves an ascending alpha list, warm-starting each run from the previous
// envelope: the map alpha -> envelope is non-increasing, so the previous
// field is a valid upper barrier and the min-only updates keep the results
// node-wise ordered exactly.
inline std::vector<EnvelopeResult> alpha_sweep(const StrictlyConvexDomain& domain,
                                               const BoundaryDatum& g,
                                               const std::vector<double>& alphas, double h,
                                               int width, double tol, int max_iter,
                                               IterationMode mode = IterationMode::GaussSeidel) {
    if (alphas.empty()) throw std::domain_error("alpha_sweep: empty alpha list");
    for (size_t i = 0; i + 1 < alphas.size(); ++i)
        if (!(alphas[i] < alphas[i + 1]))
            throw std::domain_error("alpha_sweep: alphas must be strictly ascending");

    GridPtr grid = build_grid(domain, h);
    const ArmTable arms = build_arms(grid, domain, g, build_directions(width));
    Field u = init_field(grid, domain, g);
    std::vector<EnvelopeResult> out;
    out.reserve(alphas.size());
    for (double a : alphas) {
        EnvelopeResult res = solve_on(arms, u, make_alpha(a), tol, max_iter, mode);
        u = res.field;  // upper barrier for the next (larger) alpha
        out.push_back(std::move(res));
    }
    return out;
}

}  // namespace alphaconv
