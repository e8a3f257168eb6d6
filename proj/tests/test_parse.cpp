#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twderham/parse.hpp"

using namespace twd;

namespace {
const RingSpec qq = RingSpec::rationals();
const std::vector<std::string> xy{"x1", "x2"};
}  // namespace

TEST_CASE("polynomial grammar") {
    CHECK(parse_poly(qq, "x1^3 + x2^3", xy) ==
          Poly::variable(qq, 2, 0).pow(3) + Poly::variable(qq, 2, 1).pow(3));
    CHECK(parse_poly(qq, "2*x1 - 3", xy) ==
          Poly::variable(qq, 2, 0).scaled(qq.from_int(2)) -
              Poly::constant(qq, 2, qq.from_int(3)));
    CHECK(parse_poly(qq, "(x1 + x2)^2", xy) ==
          (Poly::variable(qq, 2, 0) + Poly::variable(qq, 2, 1)).pow(2));
    CHECK(parse_poly(qq, "x1^3/3", xy) ==
          Poly::variable(qq, 2, 0).pow(3).scaled(qq.from_mpq(mpq_class(1, 3))));
    CHECK(parse_poly(qq, "-x1^2", xy) == -Poly::variable(qq, 2, 0).pow(2));
    CHECK(parse_poly(qq, "1/2", xy) == Poly::constant(qq, 2, qq.from_mpq(mpq_class(1, 2))));
}

TEST_CASE("form grammar") {
    Form f = parse_form(qq, "x2 * dx1", xy);
    CHECK(f.component(0b01) == Poly::variable(qq, 2, 1));

    Form w = parse_form(qq, "dx1^dx2", xy);
    CHECK(w.component(0b11) == Poly::constant(qq, 2, qq.one()));

    Form rev = parse_form(qq, "dx2^dx1", xy);
    CHECK(rev.component(0b11) == Poly::constant(qq, 2, qq.from_int(-1)));

    Form mixed = parse_form(qq, "(x1 + 1) * dx2 - x2 * dx1", xy);
    CHECK(mixed.component(0b10) == parse_poly(qq, "x1 + 1", xy));
    CHECK(mixed.component(0b01) == -Poly::variable(qq, 2, 1));

    // t as a variable with its differential
    std::vector<std::string> xt{"x1", "t"};
    Form dt = parse_form(qq, "x1 * dt", xt);
    CHECK(dt.component(0b10) == Poly::variable(qq, 2, 0));
}

TEST_CASE("parse errors carry line and column") {
    CHECK_THROWS_WITH_AS(parse_poly(qq, "x1 + ", xy), doctest::Contains("column 6"), Error);
    CHECK_THROWS_WITH_AS(parse_poly(qq, "x3", xy), doctest::Contains("unknown variable"), Error);
    CHECK_THROWS_WITH_AS(parse_poly(qq, "x1 $ x2", xy), doctest::Contains("column 4"), Error);
    CHECK_THROWS_WITH_AS(parse_poly(qq, "x1 ^ x2", xy),
                         doctest::Contains("exponent must be a nonnegative integer"), Error);
    CHECK_THROWS_WITH_AS(parse_poly(qq, "(x1 + 1", xy), doctest::Contains("expected ')'"), Error);
    CHECK_THROWS_WITH_AS(parse_poly(qq, "x1\n+ $", xy), doctest::Contains("line 2"), Error);
    CHECK_THROWS_WITH_AS(parse_poly(qq, "dx1", xy), doctest::Contains("ParseError"), Error);
    CHECK_THROWS_WITH_AS(parse_poly(qq, "x1 / x2", xy),
                         doctest::Contains("divisor must be a constant"), Error);
}

TEST_CASE("division requires a unit in the ring") {
    const RingSpec zz = RingSpec::integers();
    CHECK_THROWS_WITH_AS(parse_poly(zz, "x1/2", {"x1"}), doctest::Contains("not a unit"), Error);
    CHECK_THROWS_WITH_AS(parse_poly(zz, "4/2", {"x1"}), doctest::Contains("not a unit"), Error);
    CHECK(parse_poly(zz, "x1/(-1)", {"x1"}) == -Poly::variable(zz, 1, 0));
    CHECK(parse_poly(qq, "4/2", {"x1"}) == Poly::constant(qq, 1, qq.from_int(2)));
}
