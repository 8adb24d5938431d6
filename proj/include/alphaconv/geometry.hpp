#pragma once

// Strictly convex planar domains given by smooth gauges (no meshes, no
// polygon corners), boundary parameterization by the ray angle from the
// center, and expression-backed boundary data.

#include <cmath>
#include <stdexcept>
#include <string>

#include "alphaconv/expr.hpp"

namespace alphaconv {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};

struct BBox {
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
};

enum class DomainKind { Disc, Ellipse, Superellipse };

// The region {gauge < 1}.  Gauges:
//   disc          ((x-c)^2 + (y-c)^2) / r^2
//   ellipse       ((x-c)/a)^2 + ((y-c)/b)^2           with a >= b > 0
//   superellipse  |(x-c)/a|^p + |(y-c)/b|^p           with p > 1
class StrictlyConvexDomain {
public:
    static StrictlyConvexDomain disc(Vec2 center, double radius) {
        if (!(radius > 0.0)) throw std::domain_error("disc: radius must be positive");
        StrictlyConvexDomain d;
        d.kind_ = DomainKind::Disc;
        d.center_ = center;
        d.a_ = d.b_ = radius;
        return d;
    }

    static StrictlyConvexDomain ellipse(Vec2 center, double a, double b) {
        if (!(a >= b && b > 0.0)) throw std::domain_error("ellipse: need semi-axes a >= b > 0");
        StrictlyConvexDomain d;
        d.kind_ = DomainKind::Ellipse;
        d.center_ = center;
        d.a_ = a;
        d.b_ = b;
        return d;
    }

    static StrictlyConvexDomain superellipse(Vec2 center, double a, double b, double p) {
        if (!(a >= b && b > 0.0)) throw std::domain_error("superellipse: need semi-axes a >= b > 0");
        if (!(p > 1.0)) throw std::domain_error("superellipse: exponent must exceed 1 for strict convexity");
        StrictlyConvexDomain d;
        d.kind_ = DomainKind::Superellipse;
        d.center_ = center;
        d.a_ = a;
        d.b_ = b;
        d.p_ = p;
        return d;
    }

    DomainKind kind() const { return kind_; }
    Vec2 center() const { return center_; }
    double semi_major() const { return a_; }
    double semi_minor() const { return b_; }
    double exponent() const { return p_; }

    double gauge(Vec2 z) const {
        const double u = (z.x - center_.x) / a_;
        const double v = (z.y - center_.y) / b_;
        if (kind_ == DomainKind::Superellipse)
            return std::pow(std::abs(u), p_) + std::pow(std::abs(v), p_);
        return u * u + v * v;
    }

    bool contains(Vec2 z) const { return gauge(z) < 1.0 - 1e-14; }

    BBox bounding_box() const {
        return {center_.x - a_, center_.x + a_, center_.y - b_, center_.y + b_};
    }

    double diameter() const { return 2.0 * a_; }

    struct RayHit {
        Vec2 point;
        double distance = 0.0;
    };

    // Unique boundary crossing of the ray z + s v, s > 0, for interior z and
    // unit v: exponential bracketing of the inside/outside predicate, then
    // bisection until |gauge - 1| <= 1e-12.
    RayHit ray_exit(Vec2 z, Vec2 v) const {
        if (!contains(z)) throw std::domain_error("ray_exit: start point is not interior");
        double s_out = 0.25 * diameter();
        for (int i = 0; i < 64 && gauge(z + v * s_out) < 1.0; ++i) s_out *= 2.0;
        double s_in = 0.0;
        double mid = s_out;
        for (int it = 0; it < 200; ++it) {
            mid = 0.5 * (s_in + s_out);
            const double g = gauge(z + v * mid);
            if (std::abs(g - 1.0) <= 1e-12) break;
            if (g < 1.0)
                s_in = mid;
            else
                s_out = mid;
        }
        return {z + v * mid, mid};
    }

    // Boundary point on the ray from the center at angle theta.
    Vec2 boundary_point(double theta) const {
        return ray_exit(center_, {std::cos(theta), std::sin(theta)}).point;
    }

    // Ray angle of a (boundary) point, in [0, 2pi); inverse of boundary_point.
    double theta_of(Vec2 p) const {
        double t = std::atan2(p.y - center_.y, p.x - center_.x);
        if (t < 0.0) t += 2.0 * std::acos(-1.0);
        return t;
    }

private:
    DomainKind kind_ = DomainKind::Disc;
    Vec2 center_{};
    double a_ = 1.0, b_ = 1.0, p_ = 2.0;
};

// Boundary datum g evaluated at boundary points; x, y bind to coordinates
// and theta to the ray angle.  Deterministic: equal inputs give bit-equal
// outputs (pure double arithmetic on an immutable tree).
class BoundaryDatum {
public:
    BoundaryDatum() = default;
    explicit BoundaryDatum(Expression expr, std::string text)
        : expr_(std::move(expr)), text_(std::move(text)) {}

    const std::string& text() const { return text_; }
    const Expression& expression() const { return expr_; }

    double operator()(const StrictlyConvexDomain& domain, Vec2 p) const {
        return expr_.eval(p.x, p.y, domain.theta_of(p));
    }

    double at_theta(const StrictlyConvexDomain& domain, double theta) const {
        const Vec2 p = domain.boundary_point(theta);
        return expr_.eval(p.x, p.y, theta);
    }

private:
    Expression expr_;
    std::string text_;
};

inline BoundaryDatum parse_datum(std::string_view text) {
    return BoundaryDatum(Expression::parse(text), std::string(text));
}

}  // namespace alphaconv
