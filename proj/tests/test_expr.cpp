#include <doctest.h>

#include "isocert/errors.hpp"
#include "isocert/expr.hpp"

#include <cmath>

using namespace isocert;

TEST_CASE("expression evaluation") {
    CHECK(Expr::parse("x^2")(3) == 9.0);
    CHECK(Expr::parse("abs(x)*log(1+x^2)")(1) == doctest::Approx(0.69314718055994531));
    CHECK_THROWS_AS(Expr::parse("log(x)")(-1), DomainError);
    CHECK(Expr::parse("-x^2")(3) == -9.0);
    CHECK(Expr::parse("2^3^2")(0) == 512.0);
    CHECK(Expr::parse("2^-1")(0) == 0.5);
    CHECK(Expr::parse("1 - 2 - 3")(0) == -4.0);
    CHECK(Expr::parse("8/2/2")(0) == 2.0);
    CHECK(Expr::parse("pow(x, 1.5) + sqrt(4) + exp(0)")(4) == doctest::Approx(11.0));
    CHECK_THROWS_AS(Expr::parse("1/x")(0), DomainError);
}

TEST_CASE("parse errors carry offsets") {
    try {
        Expr::parse("x + * 2");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
    }
    try {
        Expr::parse("abs(y)");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
    }
    CHECK_THROWS_AS(Expr::parse(""), ParseError);
    CHECK_THROWS_AS(Expr::parse("(x"), ParseError);
    CHECK_THROWS_AS(Expr::parse("pow(x)"), ParseError);
}

TEST_CASE("print round-trips") {
    for (const char* s : {"x^2", "abs(x)*log(1+x^2)", "-x^2 + 3/(x - 1)", "pow(x, 0.1) - 1e-3", "2^-x^2"}) {
        auto e = Expr::parse(s);
        CHECK(Expr::parse(e.print()) == e);
        CHECK(Expr::parse(e.print()).print() == e.print());
    }
}
