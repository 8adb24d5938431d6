#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "alphaconv/analysis.hpp"
#include "alphaconv/envelope.hpp"

using namespace alphaconv;

namespace {

StrictlyConvexDomain unit_disc() { return StrictlyConvexDomain::disc({0, 0}, 1.0); }

double sup_error_vs(const Field& f, double (*exact)(Vec2)) {
    double sup = 0.0;
    for (size_t n = 0; n < f.size(); ++n)
        sup = std::max(sup, std::abs(f[n] - exact(f.grid->coord(static_cast<int>(n)))));
    return sup;
}

}  // namespace

TEST_CASE("init_field starts at the sampled boundary maximum plus margin") {
    const auto disc = unit_disc();
    const GridPtr g = build_grid(disc, 0.25);
    const Field f3 = init_field(g, disc, parse_datum("3"));
    CHECK(f3[0] == Catch::Approx(3.0 + 1e-6).margin(1e-15));
    const Field fx = init_field(g, disc, parse_datum("x"));
    CHECK(fx[0] == Catch::Approx(1.0 + 1e-6).margin(1e-6));
    const Field fc = init_field(g, disc, parse_datum("cos(2*theta)"));
    CHECK(fc[0] == Catch::Approx(1.0 + 1e-6).margin(1e-6));
}

TEST_CASE("chord_update is the 1-D solution through the arm values") {
    CHECK(chord_update(make_alpha(1.0), 0, 1, 0.5) == 0.5);
    CHECK(chord_update(make_alpha(0.5), 0, 1, 0.5) == Catch::Approx(0.6201145069582775));
    CHECK(chord_update(make_alpha(0.0), 0, 1, 0.25) == 1.0);
}

TEST_CASE("sweeps only decrease the field and reach a fixed point") {
    const auto disc = unit_disc();
    const BoundaryDatum gx = parse_datum("x");
    const GridPtr grid = build_grid(disc, 0.5);
    const ArmTable arms = build_arms(grid, disc, gx, build_directions(1));
    const Alpha one = make_alpha(1.0);

    Field u = init_field(grid, disc, gx);
    const Field before = u;
    sweep(u, one, arms, SweepOrder::ForwardRow);
    for (size_t n = 0; n < u.size(); ++n) CHECK(u[n] <= before[n]);

    const EnvelopeResult res = solve_on(arms, init_field(grid, disc, gx), one, 1e-14, 100000);
    REQUIRE(res.converged);
    Field fixed = res.field;
    const double delta = sweep(fixed, one, arms, SweepOrder::ForwardRow);
    CHECK(delta <= 1e-13);
}

TEST_CASE("constant boundary data relax to the constant") {
    const auto disc = unit_disc();
    for (double a : {0.0, 0.5, 1.0}) {
        const EnvelopeResult res = solve_envelope(disc, parse_datum("5"), make_alpha(a), 0.25, 1,
                                                  1e-12, 100000);
        REQUIRE(res.converged);
        for (double v : res.field.values) CHECK(v == Catch::Approx(5.0).margin(1e-8));
    }
}

TEST_CASE("g = x reproduces the exact solution u = x for every alpha") {
    const auto disc = unit_disc();
    const double h = 1.0 / 32.0;
    for (double a : {0.0, 0.25, 0.5, 1.0}) {
        const EnvelopeResult res = solve_envelope(disc, parse_datum("x"), make_alpha(a), h, 2,
                                                  1e-10, 100000);
        REQUIRE(res.converged);
        CHECK(sup_error_vs(res.field, [](Vec2 z) { return z.x; }) <= 2.0 * h);
    }
}

TEST_CASE("g = x^3 at alpha = 1 recovers the convex envelope value at the center") {
    const auto disc = unit_disc();
    const EnvelopeResult res = solve_envelope(disc, parse_datum("x^3"), make_alpha(1.0), 1.0 / 64.0,
                                              3, 1e-10, 100000);
    REQUIRE(res.converged);
    const int center = res.field.grid->find(0, 0);
    REQUIRE(center >= 0);
    CHECK(res.field[center] == Catch::Approx(-0.25).margin(0.02));
}

TEST_CASE("residual classifies converged, low, and spiked fields") {
    const auto disc = unit_disc();
    const BoundaryDatum gx = parse_datum("x");
    const double h = 1.0 / 16.0;
    const Alpha half = make_alpha(0.5);
    const EnvelopeResult res = solve_envelope(disc, gx, half, h, 2, 1e-12, 100000);
    REQUIRE(res.converged);
    const GridPtr grid = res.field.grid;
    const ArmTable arms = build_arms(grid, disc, gx, build_directions(2));

    const ResidualReport rep = residual(res.field, half, arms);
    for (double r : rep.r.values) {
        CHECK(r >= -1e-9);
        CHECK(r <= 3.0 * h * h);
    }

    Field low;
    low.grid = grid;
    low.values.assign(grid->size(), -2.0);  // min g - 1
    const ResidualReport rep_low = residual(low, half, arms);
    double max_r = 0.0;
    for (double r : rep_low.r.values) {
        CHECK(r >= 0.0);
        max_r = std::max(max_r, r);
    }
    CHECK(max_r > 0.5);

    Field spiked = res.field;
    const int center = grid->find(0, 0);
    spiked.values[center] += 1.0;
    const ResidualReport rep_spike = residual(spiked, half, arms);
    CHECK(rep_spike.r.values[center] <= -0.5);
}

TEST_CASE("alpha_sweep warm starts give exactly ordered envelopes") {
    const auto disc = unit_disc();
    const BoundaryDatum g3 = parse_datum("x^3");
    const auto runs = alpha_sweep(disc, g3, {0.25, 0.5, 1.0}, 1.0 / 16.0, 2, 1e-10, 100000);
    REQUIRE(runs.size() == 3);
    for (const auto& r : runs) REQUIRE(r.converged);
    for (size_t i = 0; i + 1 < runs.size(); ++i) {
        const FieldComparison cmp = compare_fields(runs[i + 1].field, runs[i].field, 1e-9);
        CHECK(cmp.first_le_second);
    }

    // single-alpha sweep is bit-identical to a plain solve
    const auto single = alpha_sweep(disc, g3, {1.0}, 1.0 / 16.0, 2, 1e-10, 100000);
    const EnvelopeResult direct = solve_envelope(disc, g3, make_alpha(1.0), 1.0 / 16.0, 2, 1e-10,
                                                 100000);
    CHECK(compare_fields(single[0].field, direct.field).sup_diff == 0.0);

    // both endpoint problems are solved exactly by u = x for g = x
    const auto ends = alpha_sweep(disc, parse_datum("x"), {0.0, 1.0}, 1.0 / 16.0, 2, 1e-10, 100000);
    for (const auto& r : ends)
        CHECK(sup_error_vs(r.field, [](Vec2 z) { return z.x; }) <= 2.0 / 16.0);

    CHECK_THROWS_AS(alpha_sweep(disc, g3, {0.5, 0.25}, 0.25, 1, 1e-10, 1000), std::domain_error);
}

TEST_CASE("converged fields respect the boundary range and data comparison") {
    const auto disc = unit_disc();
    const BoundaryDatum g1 = parse_datum("x^3");
    const BoundaryDatum g2 = parse_datum("x^3+0.3");
    const Alpha alpha = make_alpha(0.75);
    const EnvelopeResult r1 = solve_envelope(disc, g1, alpha, 1.0 / 16.0, 2, 1e-10, 100000);
    const EnvelopeResult r2 = solve_envelope(disc, g2, alpha, 1.0 / 16.0, 2, 1e-10, 100000);

    const double gmin = boundary_range(disc, g1).first;
    for (double v : r1.field.values) CHECK(v >= gmin - 1e-9);

    CHECK(compare_fields(r1.field, r2.field, 1e-9).first_le_second);
}

TEST_CASE("sandwich between the endpoint envelopes") {
    const auto disc = unit_disc();
    const auto runs =
        alpha_sweep(disc, parse_datum("x^3"), {0.0, 0.35, 0.7, 1.0}, 1.0 / 16.0, 2, 1e-10, 100000);
    for (const auto& r : runs) {
        CHECK(compare_fields(runs.back().field, r.field, 1e-9).first_le_second);
        CHECK(compare_fields(r.field, runs.front().field, 1e-9).first_le_second);
    }
}

TEST_CASE("fixed forward order and cycling orders agree at the fixed point") {
    const auto disc = unit_disc();
    const BoundaryDatum g3 = parse_datum("x^3");
    const double tol = 1e-12;
    const GridPtr grid = build_grid(disc, 1.0 / 8.0);
    const ArmTable arms = build_arms(grid, disc, g3, build_directions(2));
    const Alpha half = make_alpha(0.5);

    Field fixed_order = init_field(grid, disc, g3);
    for (int it = 0; it < 200000; ++it)
        if (sweep(fixed_order, half, arms, SweepOrder::ForwardRow) <= tol / 100.0) break;

    const EnvelopeResult cycling = solve_on(arms, init_field(grid, disc, g3), half, tol, 200000);
    REQUIRE(cycling.converged);
    CHECK(compare_fields(fixed_order, cycling.field).sup_diff <= 10.0 * tol);
}

TEST_CASE("Gauss-Seidel and Jacobi converge to the same field") {
    const auto disc = unit_disc();
    const BoundaryDatum g = parse_datum("cos(2*theta)");
    const double tol = 1e-12;
    const EnvelopeResult gs = solve_envelope(disc, g, make_alpha(0.5), 1.0 / 8.0, 2, tol, 200000,
                                             IterationMode::GaussSeidel);
    const EnvelopeResult jac = solve_envelope(disc, g, make_alpha(0.5), 1.0 / 8.0, 2, tol, 200000,
                                              IterationMode::Jacobi);
    REQUIRE(gs.converged);
    REQUIRE(jac.converged);
    CHECK(compare_fields(gs.field, jac.field).sup_diff <= 10.0 * tol);
}

TEST_CASE("elliptic domains solve the same exact-datum problem") {
    // vertical chords of an axis-aligned ellipse have equal x at both caps,
    // so g = x still forces u = x
    const auto ell = StrictlyConvexDomain::ellipse({0, 0}, 2.0, 1.0);
    const double h = 1.0 / 16.0;
    for (double a : {0.0, 0.5, 1.0}) {
        const EnvelopeResult res = solve_envelope(ell, parse_datum("x"), make_alpha(a), h, 2,
                                                  1e-10, 100000);
        REQUIRE(res.converged);
        CHECK(sup_error_vs(res.field, [](Vec2 z) { return z.x; }) <= 2.0 * h);
    }
}

TEST_CASE("non-convergence is flagged, not thrown") {
    const auto disc = unit_disc();
    const EnvelopeResult res = solve_envelope(disc, parse_datum("x"), make_alpha(0.5), 0.25, 1,
                                              1e-12, 1);
    CHECK_FALSE(res.converged);
    CHECK(res.iterations == 1);
}
