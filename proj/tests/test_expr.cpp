#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "alphaconv/expr.hpp"

using namespace alphaconv;

TEST_CASE("expression basics") {
    const double pi = std::acos(-1.0);
    CHECK(Expression::parse("x").eval(1, 0, 0) == 1.0);
    CHECK(Expression::parse("cos(2*theta)").eval(0, 1, pi / 2) == Catch::Approx(-1.0));
    CHECK(Expression::parse("x^3").eval(std::cos(pi), 0, pi) == Catch::Approx(-1.0));
    CHECK(Expression::parse("x^3+0.3").eval(2, 0, 0) == Catch::Approx(8.3));
    CHECK(Expression::parse("min(x, y)").eval(2, -1, 0) == -1.0);
    CHECK(Expression::parse("max(abs(y), 0.5)").eval(0, -0.25, 0) == 0.5);
    CHECK(Expression::parse("exp(log(x))").eval(3.7, 0, 0) == Catch::Approx(3.7));
    CHECK(Expression::parse("sqrt(x)").eval(16, 0, 0) == 4.0);
    CHECK(Expression::parse("pi").eval(0, 0, 0) == Catch::Approx(pi));
    CHECK(Expression::parse(" 1 + 2*3 ").eval(0, 0, 0) == 7.0);
    CHECK(Expression::parse("2^3^2").eval(0, 0, 0) == 512.0);  // right associative
    CHECK(Expression::parse("-x^2").eval(3, 0, 0) == -9.0);
    CHECK(Expression::parse("(1+2)*(3-5)").eval(0, 0, 0) == -6.0);
    CHECK(Expression::parse("1e2+1.5e-2").eval(0, 0, 0) == Catch::Approx(100.015));
}

TEST_CASE("parse errors carry positions") {
    try {
        Expression::parse("x+*y");
        FAIL("expected a parse error");
    } catch (const expr_error& e) {
        CHECK(e.position() == 2);
    }
    CHECK_THROWS_AS(Expression::parse("foo(1)"), expr_error);
    CHECK_THROWS_AS(Expression::parse("bar"), expr_error);
    CHECK_THROWS_AS(Expression::parse("min(1)"), expr_error);       // arity
    CHECK_THROWS_AS(Expression::parse("sin(1, 2)"), expr_error);    // arity
    CHECK_THROWS_AS(Expression::parse("sin 1"), expr_error);        // missing parens
    CHECK_THROWS_AS(Expression::parse("(1+2"), expr_error);
    CHECK_THROWS_AS(Expression::parse("1 2"), expr_error);
    CHECK_THROWS_AS(Expression::parse(""), expr_error);
}

namespace {

// Random expression trees for the print/parse round trip.
std::string random_expr(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 8);
    std::uniform_real_distribution<double> num(-3.0, 3.0);
    switch (pick(rng)) {
        case 0: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.6g", num(rng));
            return buf;
        }
        case 1: return std::uniform_int_distribution<int>(0, 1)(rng) ? "x" : "y";
        case 2: return "theta";
        case 3: return "(" + random_expr(rng, depth - 1) + "+" + random_expr(rng, depth - 1) + ")";
        case 4: return "(" + random_expr(rng, depth - 1) + "-" + random_expr(rng, depth - 1) + ")";
        case 5: return random_expr(rng, depth - 1) + "*" + random_expr(rng, depth - 1);
        case 6: return "-" + random_expr(rng, depth - 1);
        case 7: return "sin(" + random_expr(rng, depth - 1) + ")";
        default:
            return "min(" + random_expr(rng, depth - 1) + "," + random_expr(rng, depth - 1) + ")";
    }
}

}  // namespace

TEST_CASE("pretty-print round trip evaluates identically") {
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> pt(-2.0, 2.0);
    for (int i = 0; i < 60; ++i) {
        const std::string text = random_expr(rng, 4);
        const Expression e1 = Expression::parse(text);
        const Expression e2 = Expression::parse(e1.str());
        for (int k = 0; k < 100; ++k) {
            const double x = pt(rng), y = pt(rng), th = pt(rng);
            const double v1 = e1.eval(x, y, th);
            const double v2 = e2.eval(x, y, th);
            if (std::isnan(v1)) {
                CHECK(std::isnan(v2));
            } else {
                CHECK(v2 == Catch::Approx(v1).margin(1e-14));
            }
        }
    }
}

TEST_CASE("division and power edge cases evaluate IEEE-style") {
    CHECK(std::isinf(Expression::parse("1/x").eval(0, 0, 0)));
    CHECK(std::isnan(Expression::parse("x^0.5").eval(-1, 0, 0)));
    CHECK(Expression::parse("(0-1)^3").eval(0, 0, 0) == -1.0);
}
