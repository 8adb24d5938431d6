#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "alphaconv/analysis.hpp"
#include "alphaconv/envelope.hpp"

using namespace alphaconv;

namespace {

StrictlyConvexDomain unit_disc() { return StrictlyConvexDomain::disc({0, 0}, 1.0); }

Field sample_field(GridPtr grid, double (*f)(Vec2)) {
    Field out;
    out.values.reserve(grid->size());
    for (size_t n = 0; n < grid->size(); ++n) out.values.push_back(f(grid->coord(static_cast<int>(n))));
    out.grid = std::move(grid);
    return out;
}

bool has_centered_stencil(const Grid& g, int n) {
    const auto [i, j] = g.node(n);
    return g.find(i + 1, j) >= 0 && g.find(i - 1, j) >= 0 && g.find(i, j + 1) >= 0 &&
           g.find(i, j - 1) >= 0;
}

}  // namespace

TEST_CASE("check_alpha_convex certifies envelopes and flags the -x^4 fixture") {
    const auto disc = unit_disc();
    const BoundaryDatum g = parse_datum("cos(2*theta)");
    const Alpha half = make_alpha(0.5);
    const EnvelopeResult res = solve_envelope(disc, g, half, 1.0 / 16.0, 2, 1e-10, 100000);
    REQUIRE(res.converged);
    const ArmTable arms = build_arms(res.field.grid, disc, g, build_directions(2));
    CHECK(check_alpha_convex(res.field, half, arms, 1e-9).empty());

    // u = -(x^4) solves the quasiconvex PDE but is not quasiconvex
    const BoundaryDatum g4 = parse_datum("-x^4");
    const GridPtr grid = build_grid(disc, 1.0 / 16.0);
    const ArmTable arms4 = build_arms(grid, disc, g4, build_directions(2));
    const Field f4 = sample_field(grid, [](Vec2 z) { return -std::pow(z.x, 4.0); });
    const ViolationReport rep = check_alpha_convex(f4, make_alpha(0.0), arms4, 1e-9);
    CHECK_FALSE(rep.empty());
    CHECK(rep.worst > 1e-6);

    // affine fields are alpha-convex for every alpha
    const BoundaryDatum gx = parse_datum("x");
    const ArmTable armsx = build_arms(grid, disc, gx, build_directions(2));
    const Field fx = sample_field(grid, [](Vec2 z) { return z.x; });
    for (double a : {0.0, 0.5, 1.0})
        CHECK(check_alpha_convex(fx, make_alpha(a), armsx, 1e-9).empty());
}

TEST_CASE("gradient: centered interior estimates") {
    const auto disc = unit_disc();
    const GridPtr grid = build_grid(disc, 1.0 / 32.0);

    const Field fx = sample_field(grid, [](Vec2 z) { return z.x; });
    const auto gx = gradient(fx);
    for (size_t n = 0; n < fx.size(); ++n) {
        if (!has_centered_stencil(*grid, static_cast<int>(n))) continue;
        CHECK(gx[n].x == Catch::Approx(1.0).margin(1e-12));
        CHECK(gx[n].y == Catch::Approx(0.0).margin(1e-12));
    }

    const Field fc = sample_field(grid, [](Vec2) { return 3.25; });
    for (const Vec2& v : gradient(fc)) {
        CHECK(v.x == 0.0);
        CHECK(v.y == 0.0);
    }

    const Field fq = sample_field(grid, [](Vec2 z) { return z.x * z.x; });
    const auto gq = gradient(fq);
    for (size_t n = 0; n < fq.size(); ++n) {
        if (!has_centered_stencil(*grid, static_cast<int>(n))) continue;
        CHECK(gq[n].x == Catch::Approx(2.0 * grid->coord(static_cast<int>(n)).x).margin(1e-3));
    }
}

TEST_CASE("support_hyperplane touches envelopes from below") {
    const auto disc = unit_disc();
    const BoundaryDatum gx = parse_datum("x");
    const double h = 1.0 / 16.0;

    const EnvelopeResult res = solve_envelope(disc, gx, make_alpha(0.5), h, 2, 1e-12, 100000);
    REQUIRE(res.converged);
    const int center = res.field.grid->find(0, 0);
    const HyperplaneCertificate cert = support_hyperplane(res.field, make_alpha(0.5), center, h);
    CHECK(cert.plane.nu.x == Catch::Approx(1.0).margin(1e-6));
    CHECK(cert.plane.slope_c == Catch::Approx(1.0).margin(1e-6));  // K |grad| = 1
    CHECK(cert.base_gap == 0.0);
    CHECK(cert.max_gap <= 1e-3);  // ln(1+t) <= t

    const EnvelopeResult res1 = solve_envelope(disc, gx, make_alpha(1.0), h, 2, 1e-12, 100000);
    const HyperplaneCertificate cert1 = support_hyperplane(res1.field, make_alpha(1.0), center, h);
    CHECK(cert1.max_gap <= 1e-9);  // the plane is the function itself

    const EnvelopeResult resc = solve_envelope(disc, parse_datum("2"), make_alpha(0.5), h, 2,
                                               1e-12, 100000);
    const HyperplaneCertificate certc = support_hyperplane(resc.field, make_alpha(0.5), center, h);
    CHECK(certc.plane.slope_c == 0.0);
    CHECK(certc.max_gap <= 1e-7);

    CHECK_THROWS_AS(support_hyperplane(res.field, make_alpha(0.0), center, h), std::domain_error);
}

TEST_CASE("lipschitz_estimate on exact and solved fields") {
    const auto disc = unit_disc();
    const GridPtr grid = build_grid(disc, 1.0 / 32.0);
    CHECK(lipschitz_estimate(sample_field(grid, [](Vec2 z) { return z.x; }), disc) ==
          Catch::Approx(1.0).margin(1e-12));
    CHECK(lipschitz_estimate(sample_field(grid, [](Vec2) { return -1.5; }), disc) == 0.0);

    const BoundaryDatum g = parse_datum("cos(2*theta)");
    const EnvelopeResult coarse = solve_envelope(disc, g, make_alpha(0.5), 1.0 / 32.0, 2, 1e-10,
                                                 100000);
    const EnvelopeResult fine = solve_envelope(disc, g, make_alpha(0.5), 1.0 / 64.0, 2, 1e-10,
                                               100000);
    const double lc = lipschitz_estimate(coarse.field, disc);
    const double lf = lipschitz_estimate(fine.field, disc);
    CHECK(lc > 0.0);
    CHECK(std::abs(lf - lc) <= 0.2 * lc);
}

TEST_CASE("c1_diagnostic: smooth fields are flat, the |x| crease persists") {
    const auto disc = unit_disc();
    for (double h : {1.0 / 16.0, 1.0 / 32.0}) {
        const GridPtr grid = build_grid(disc, h);
        const auto flat = c1_diagnostic(sample_field(grid, [](Vec2 z) { return z.x; }));
        REQUIRE(flat.size() == 3);
        CHECK(flat[0].separation == Catch::Approx(2.0 * h));
        for (const auto& row : flat) CHECK(row.max_jump <= 1e-10);

        const auto kink = c1_diagnostic(sample_field(grid, [](Vec2 z) { return std::abs(z.x); }));
        CHECK(kink[0].max_jump >= 1.5);
    }
}

TEST_CASE("check_composition samples the first-order condition") {
    const Expression one = Expression::parse("1");
    const Expression zero = Expression::parse("0");
    for (double a : {0.0, 0.3, 1.0})
        CHECK(check_composition(make_alpha(a), one, zero, -10, 10));

    const Expression ex = Expression::parse("exp(x)");
    CHECK(check_composition(make_alpha(0.5), ex, ex, -5, 5));

    // arctan: f' = 1/(1+s^2) >= 0 but f'' < 0 kills the alpha = 1 condition
    const Expression datan = Expression::parse("1/(1+x^2)");
    const Expression d2atan = Expression::parse("-2*x/(1+x^2)^2");
    CHECK_FALSE(check_composition(make_alpha(1.0), datan, d2atan, 0, 3));
}

TEST_CASE("compare_fields reports exact node-wise statistics") {
    const auto disc = unit_disc();
    const GridPtr grid = build_grid(disc, 0.25);
    const Field f = sample_field(grid, [](Vec2 z) { return z.x + z.y; });
    Field f1 = f;
    const FieldComparison same = compare_fields(f, f1);
    CHECK(same.sup_diff == 0.0);
    CHECK(same.first_le_second);
    CHECK(same.second_le_first);

    for (double& v : f1.values) v += 1.0;
    const FieldComparison shifted = compare_fields(f, f1);
    CHECK(shifted.sup_diff == 1.0);
    CHECK(shifted.first_le_second);
    CHECK_FALSE(shifted.second_le_first);

    const auto runs = alpha_sweep(disc, parse_datum("x^3"), {0.5, 1.0}, 1.0 / 16.0, 2, 1e-10,
                                  100000);
    CHECK(compare_fields(runs[1].field, runs[0].field, 1e-9).first_le_second);

    const GridPtr other = build_grid(disc, 0.5);
    Field g_other;
    g_other.grid = other;
    g_other.values.assign(other->size(), 0.0);
    CHECK_THROWS_AS(compare_fields(f, g_other), std::domain_error);
}

TEST_CASE("envelope minima: bounded by the datum and attained inside") {
    const auto disc = unit_disc();
    const BoundaryDatum g = parse_datum("cos(2*theta)");
    const double h = 1.0 / 32.0;
    const EnvelopeResult res = solve_envelope(disc, g, make_alpha(0.5), h, 2, 1e-10, 100000);
    REQUIRE(res.converged);
    const double gmin = boundary_range(disc, g).first;
    double vmin = std::numeric_limits<double>::infinity();
    for (double v : res.field.values) vmin = std::min(vmin, v);
    CHECK(vmin >= gmin - 1e-9);

    // the minimum level set reaches at least 2h inside (here the whole x = 0 column)
    bool deep_argmin = false;
    for (size_t n = 0; n < res.field.size(); ++n) {
        if (res.field[n] > vmin + 1e-9) continue;
        const Vec2 z = res.field.grid->coord(static_cast<int>(n));
        if (1.0 - z.norm() >= 2.0 * h) deep_argmin = true;
    }
    CHECK(deep_argmin);
}

TEST_CASE("bridge gap shrinks as the alpha increment halves") {
    const auto disc = unit_disc();
    const auto runs = alpha_sweep(disc, parse_datum("x^3"), {0.5, 0.525, 0.55, 0.6, 0.7},
                                  1.0 / 16.0, 2, 1e-10, 100000);
    const Field& base = runs[0].field;
    double prev = std::numeric_limits<double>::infinity();
    for (size_t i = runs.size(); i-- > 1;) {  // eps = 0.2, 0.1, 0.05, 0.025
        const double d = compare_fields(base, runs[i].field).sup_diff;
        CHECK(d <= prev + 1e-12);
        prev = d;
    }
}
