#pragma once

// One-dimensional alpha-calculus: closed-form solutions of
//   alpha * v''(t) + (1 - alpha) * |v'(t)|^2 = 0
// between two endpoint values, their derivatives and maximal extension
// intervals, and the eta-perturbed family solving the same equation with
// right-hand side -eta^2.  Everything here is a pure function of its
// arguments and safe to call concurrently.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace alphaconv {

// Interpolation parameter with its derived constant K = (1-alpha)/alpha.
// alpha = 1 is the affine (classically convex) limit, alpha = 0 the
// quasiconvex limit; the latter is a tagged special case whose K is an
// unused +inf sentinel, never produced by a division.
struct Alpha {
    double value = 1.0;
    double k = 0.0;

    bool quasiconvex_limit() const { return value == 0.0; }
    bool affine_limit() const { return value == 1.0; }
};

inline Alpha make_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::domain_error("alpha must lie in [0,1], got " + std::to_string(alpha));
    Alpha a;
    a.value = alpha;
    if (alpha == 0.0)
        a.k = std::numeric_limits<double>::infinity();
    else
        a.k = (1.0 - alpha) / alpha;
    return a;
}

// Open interval, possibly unbounded on either side.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double t) const { return t > lo && t < hi; }
};

namespace detail {

// Threshold below which K*(b-a) is treated as an affine perturbation;
// the exact log/exp form cancels catastrophically there.
inline constexpr double kAffineSwitch = 1e-8;

inline double affine_with_correction(double a, double b, double k, double t) {
    const double d = b - a;
    return a + d * t + 0.5 * k * d * d * t * (1.0 - t);
}

}  // namespace detail

// Value at t of the solution with v(0) = a, v(1) = b.  For alpha in (0,1)
// this is (1/K) ln(1 + (e^{(b-a)K} - 1) t) + a, evaluated anchored at the
// larger endpoint so every exponential argument is <= 0.  Valid on the
// maximal interval; t in [0,1] always works.  For alpha = 0 only t in [0,1]
// is meaningful: the value is max(a,b) strictly inside and the endpoint
// data at t = 0, 1.
inline double chord_value(const Alpha& alpha, double a, double b, double t) {
    if (t == 0.0) return a;
    if (t == 1.0) return b;
    if (a == b) return a;
    if (alpha.affine_limit()) return a + (b - a) * t;
    if (alpha.quasiconvex_limit()) {
        if (t < 0.0 || t > 1.0)
            throw std::domain_error("chord_value: alpha = 0 supports only t in [0,1]");
        return std::max(a, b);
    }
    const double k = alpha.k;
    const double delta = std::abs(b - a);
    if (k * delta < detail::kAffineSwitch)
        return detail::affine_with_correction(a, b, k, t);
    const double tp = (b > a) ? t : 1.0 - t;
    const double em = -std::expm1(-k * delta);  // 1 - e^{-K|b-a|} in (0,1]
    const double shift = (tp - 1.0) * em;       // log argument is 1 + shift
    if (shift <= -1.0)
        throw std::domain_error("chord_value: t outside the maximal interval");
    return std::max(a, b) + std::log1p(shift) / k;
}

// v'(t) of the same solution.  Requires alpha in (0,1].
inline double chord_derivative(const Alpha& alpha, double a, double b, double t) {
    if (alpha.quasiconvex_limit())
        throw std::domain_error("chord_derivative: undefined at alpha = 0");
    if (a == b) return 0.0;
    if (alpha.affine_limit()) return b - a;
    const double k = alpha.k;
    const double d = b - a;
    if (k * std::abs(d) < detail::kAffineSwitch)
        return d + 0.5 * k * d * d * (1.0 - 2.0 * t);
    const double tp = (b > a) ? t : 1.0 - t;
    const double em = -std::expm1(-k * std::abs(d));
    const double arg = 1.0 + (tp - 1.0) * em;
    if (arg <= 0.0)
        throw std::domain_error("chord_derivative: t outside the maximal interval");
    const double mag = em / (k * arg);
    return (b > a) ? mag : -mag;
}

// Largest open interval on which the solution extends past [0,1]:
// (-delta, +inf) for b > a, (-inf, 1 + delta) for a > b, the whole line
// for a = b or alpha = 1, with delta = 1 / (e^{|b-a|K} - 1).
inline Interval maximal_interval(const Alpha& alpha, double a, double b) {
    if (alpha.quasiconvex_limit())
        throw std::domain_error("maximal_interval: degenerate at alpha = 0");
    Interval iv;
    if (a == b || alpha.affine_limit()) return iv;
    const double delta = 1.0 / std::expm1(alpha.k * std::abs(b - a));
    if (b > a)
        iv.lo = -delta;
    else
        iv.hi = 1.0 + delta;
    return iv;
}

// Re-solves through two interior samples: the chord between v(s) and v(s2),
// evaluated at t.  By the scaling property this equals the original chord
// at s + t (s2 - s); the solver's correctness tests rely on that identity.
inline double chord_consistency(const Alpha& alpha, double a, double b,
                                double s, double s2, double t) {
    if (!(0.0 <= s && s < s2 && s2 <= 1.0))
        throw std::domain_error("chord_consistency: need 0 <= s < s2 <= 1");
    if (!(t >= 0.0 && t <= 1.0))
        throw std::domain_error("chord_consistency: need t in [0,1]");
    const double va = chord_value(alpha, a, b, s);
    const double vb = chord_value(alpha, a, b, s2);
    return chord_value(alpha, va, vb, t);
}

// Endpoint-data view of one chord solution.
struct ChordSolution {
    Alpha alpha;
    double a = 0.0;
    double b = 0.0;

    double value(double t) const { return chord_value(alpha, a, b, t); }
    double derivative(double t) const { return chord_derivative(alpha, a, b, t); }
    Interval domain() const { return maximal_interval(alpha, a, b); }
};

// Solution of alpha w'' + (1-alpha)|w'|^2 = -eta^2 with w(0) = a, w(1) = b,
// stored for the endpoint order b >= a; an input with a > b is solved after
// swapping and evaluated through t -> 1-t.
struct EtaSolution {
    Alpha alpha;
    double a = 0.0;
    double b = 0.0;
    double eta = 0.0;
    double c1 = 0.0;  // in (-pi/2, 0]
    double c2 = 0.0;
    bool reflected = false;

    double lo() const { return reflected ? b : a; }
    double hi() const { return reflected ? a : b; }
};

inline double eta_value(const EtaSolution& sol, double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::domain_error("eta_value: t must lie in [0,1]");
    const double s = sol.eta * std::sqrt(1.0 - sol.alpha.value) / sol.alpha.value;
    const double u = sol.reflected ? 1.0 - t : t;
    const double c = std::cos(sol.c1 + u * s);
    if (!(c > 0.0))
        throw std::logic_error("eta_value: cosine argument left (-pi/2, pi/2)");
    return std::log(c) / sol.alpha.k + sol.c2;
}

// Residual |cos(c1+s)/cos(c1) - e^{K(hi-lo)}| relative to the target,
// the quantity driven below 1e-12 by the bisection.
inline double eta_constraint_residual(const EtaSolution& sol) {
    const double s = sol.eta * std::sqrt(1.0 - sol.alpha.value) / sol.alpha.value;
    const double target = sol.alpha.k * (sol.hi() - sol.lo());
    const double lhs = std::log(std::cos(sol.c1 + s)) - std::log(std::cos(sol.c1));
    return std::abs(std::expm1(lhs - target));
}

inline EtaSolution eta_solution(const Alpha& alpha, double a, double b, double eta) {
    if (!(alpha.value > 0.0 && alpha.value < 1.0))
        throw std::domain_error("eta_solution: requires alpha in (0,1)");
    if (!(eta > 0.0))
        throw std::domain_error("eta_solution: requires eta > 0");
    const double s = eta * std::sqrt(1.0 - alpha.value) / alpha.value;
    const double half_pi = std::acos(-1.0) / 2.0;
    if (!(s < half_pi))
        throw std::domain_error("eta_solution: eta too large, eta sqrt(1-alpha)/alpha must be < pi/2");

    EtaSolution sol;
    sol.alpha = alpha;
    sol.a = a;
    sol.b = b;
    sol.eta = eta;
    sol.reflected = a > b;
    const double lo = sol.lo();
    const double hi = sol.hi();
    const double kappa = alpha.k * (hi - lo);

    // G(c) = log cos(c+s) - log cos(c) - kappa is strictly decreasing on
    // (-pi/2, 0], positive near -pi/2 and negative at 0, so plain bisection
    // is bracketed.  Working in log space keeps e^{kappa} out of range
    // trouble.
    auto G = [&](double c) {
        return std::log(std::cos(c + s)) - std::log(std::cos(c)) - kappa;
    };
    double hi_c = 0.0;
    double lo_c = -half_pi + half_pi / 4.0;
    for (int i = 0; i < 1200 && G(lo_c) <= 0.0; ++i)
        lo_c = -half_pi + (lo_c + half_pi) / 2.0;
    if (G(lo_c) <= 0.0)
        throw std::logic_error("eta_solution: failed to bracket c1");

    double mid = 0.5 * (lo_c + hi_c);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo_c + hi_c);
        const double g = G(mid);
        if (g == 0.0 || hi_c - lo_c <= 1e-16) break;
        if (g > 0.0)
            lo_c = mid;
        else
            hi_c = mid;
    }
    sol.c1 = mid;
    sol.c2 = lo - std::log(std::cos(sol.c1)) / alpha.k;
    if (eta_constraint_residual(sol) > 1e-12)
        throw std::runtime_error("eta_solution: bisection did not reach the 1e-12 residual");
    return sol;
}

// Max over interior samples of |alpha D2 v + (1-alpha) |D1 v|^2| on a
// uniform grid of step h.  Uses fourth-order centered stencils when five
// or more samples are available, second-order otherwise; "interior" means
// the stencil fits.
inline double ode_residual(const Alpha& alpha,
                           const std::vector<std::pair<double, double>>& samples,
                           double h) {
    const size_t n = samples.size();
    if (n < 3)
        throw std::domain_error("ode_residual: need at least 3 samples");
    if (!(h > 0.0))
        throw std::domain_error("ode_residual: need h > 0");
    for (size_t i = 0; i + 1 < n; ++i) {
        if (std::abs((samples[i + 1].first - samples[i].first) - h) > 1e-9 * std::max(1.0, h))
            throw std::domain_error("ode_residual: samples are not on a uniform grid of step h");
    }
    auto v = [&](size_t i) { return samples[i].second; };
    double worst = 0.0;
    if (n >= 5) {
        for (size_t i = 2; i + 2 < n; ++i) {
            const double d1 = (v(i - 2) - 8.0 * v(i - 1) + 8.0 * v(i + 1) - v(i + 2)) / (12.0 * h);
            const double d2 = (-v(i - 2) + 16.0 * v(i - 1) - 30.0 * v(i) + 16.0 * v(i + 1) - v(i + 2)) /
                              (12.0 * h * h);
            worst = std::max(worst, std::abs(alpha.value * d2 + (1.0 - alpha.value) * d1 * d1));
        }
    } else {
        for (size_t i = 1; i + 1 < n; ++i) {
            const double d1 = (v(i + 1) - v(i - 1)) / (2.0 * h);
            const double d2 = (v(i + 1) - 2.0 * v(i) + v(i - 1)) / (h * h);
            worst = std::max(worst, std::abs(alpha.value * d2 + (1.0 - alpha.value) * d1 * d1));
        }
    }
    return worst;
}

}  // namespace alphaconv
