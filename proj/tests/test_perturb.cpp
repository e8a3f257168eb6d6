#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "twderham/parse.hpp"
#include "twderham/perturb.hpp"

using namespace twd;
using namespace twd::testing;

namespace {
const RingSpec qq = RingSpec::rationals();
const RingSpec zz = RingSpec::integers();

GaussianProblem neg_quadratic_1d(const RingSpec& spec, const std::string& v, int order) {
    SquareMatrix a(spec, 1);
    a.set(0, 0, spec.from_int(-1));
    return GaussianProblem(a, parse_poly(spec, v, {"x1"}), order);
}

LambdaSeries series_of(const RingSpec& base, int order, std::vector<long> cs) {
    LambdaSeries s(base, order);
    for (size_t i = 0; i < cs.size(); ++i) s.set_coeff(static_cast<int>(i), base.from_int(cs[i]));
    return s;
}
}  // namespace

TEST_CASE("wick oracle: hand-checkable values") {
    SquareMatrix a(qq, 1);
    a.set(0, 0, qq.from_int(-1));
    CHECK(wick_oracle(a, Monomial::var(1, 0, 4)) == qq.from_int(3));   // 3 pairings
    CHECK(wick_oracle(a, Monomial::var(1, 0, 6)) == qq.from_int(15));  // 5!!
    CHECK(wick_oracle(a, Monomial::var(1, 0, 1)).is_zero());           // odd degree

    SquareMatrix neg_id(qq, 2);
    neg_id.set(0, 0, qq.from_int(-1));
    neg_id.set(1, 1, qq.from_int(-1));
    CHECK(wick_oracle(neg_id, Monomial({2, 2})) == qq.one());  // only the like-index pairing
}

TEST_CASE("normalization and pure Gaussian moments") {
    GaussianProblem p = neg_quadratic_1d(qq, "0", 3);
    CHECK(integrate(p, Poly::constant(qq, 1, qq.one())) ==
          LambdaSeries::constant(qq, 3, qq.one()));
    CHECK(integrate(p, parse_poly(qq, "x1^2", {"x1"})) == series_of(qq, 3, {1}));
    CHECK(integrate(p, parse_poly(qq, "x1^4", {"x1"})) == series_of(qq, 3, {3}));
    CHECK(integrate(p, parse_poly(qq, "x1^3", {"x1"})).is_zero());  // odd parity
}

TEST_CASE("perturbed integral against the Wick-ratio oracle") {
    // I(x) for f = -x^2/2 + lambda x^3; the oracle expands
    // <x e^{lambda x^3}>/<e^{lambda x^3}> by pairing enumeration.
    SquareMatrix a(qq, 1);
    a.set(0, 0, qq.from_int(-1));
    Poly v = parse_poly(qq, "x1^3", {"x1"});
    Poly g = parse_poly(qq, "x1", {"x1"});

    LambdaSeries oracle = wick_ratio_oracle(a, v, g, 4);
    // frozen oracle output: [0, 3, 0, 135]
    CHECK(oracle == series_of(qq, 4, {0, 3, 0, 135}));

    GaussianProblem p(a, v, 4);
    CHECK(integrate(p, g) == oracle);

    // N = 2 slice: I(x) = 3 lambda
    GaussianProblem p2(a, v, 2);
    CHECK(integrate(p2, g) == series_of(qq, 2, {0, 3}));
}

TEST_CASE("wick-ratio oracle agreement on random problems") {
    Rng rng(101);
    for (int t = 0; t < 40; ++t) {
        int n = 1 + t % 2;
        SquareMatrix a = random_symmetric_invertible_q(rng, n);
        Poly v = random_poly(rng, qq, n, 3, 2);
        v.drop_constant_term();
        Poly g = random_poly(rng, qq, n, 3, 2);
        GaussianProblem p(a, v, 3);
        CHECK(integrate(p, g) == wick_ratio_oracle(a, v, g, 3));
    }
}

TEST_CASE("vanishing relation") {
    SquareMatrix a(qq, 1);
    a.set(0, 0, qq.from_int(-1));

    // h = 1: I(d_a f) = 0
    GaussianProblem p0(a, parse_poly(qq, "x1^3", {"x1"}), 4);
    CHECK(check_vanishing(p0, Poly::constant(qq, 1, qq.one()), 0).is_zero());

    // h = x^5, V = x^4, N = 5
    GaussianProblem p1 = neg_quadratic_1d(qq, "x1^4", 5);
    CHECK(check_vanishing(p1, parse_poly(qq, "x1^5", {"x1"}), 0).is_zero());

    // h = x1 x2, random A (n=2), V = x1^3, N = 4
    Rng rng(7);
    SquareMatrix a2 = random_symmetric_invertible_q(rng, 2);
    GaussianProblem p2(a2, parse_poly(qq, "x1^3", {"x1", "x2"}), 4);
    CHECK(check_vanishing(p2, parse_poly(qq, "x1*x2", {"x1", "x2"}), 1).is_zero());

    for (int t = 0; t < 100; ++t) {
        int n = 1 + t % 2;
        SquareMatrix am = random_symmetric_invertible_q(rng, n);
        Poly v = random_poly(rng, qq, n, 3, 2);
        v.drop_constant_term();
        GaussianProblem p(am, v, 4);
        CHECK(check_vanishing(p, random_poly(rng, qq, n, 3, 3),
                              static_cast<int>(rng() % static_cast<uint64_t>(n)))
                  .is_zero());
    }
}

TEST_CASE("confluence: pivot strategy does not change the result") {
    Rng rng(13);
    for (int t = 0; t < 50; ++t) {
        int n = 1 + t % 3;
        SquareMatrix a = random_symmetric_invertible_q(rng, n);
        Poly v = random_poly(rng, qq, n, 3, 2);
        v.drop_constant_term();
        GaussianProblem p(a, v, 3);
        Poly g = random_poly(rng, qq, n, 4, 3);
        IntegrateOptions left, rnd;
        rnd.pivot = PivotStrategy::Random;
        rnd.seed = rng();
        CHECK(integrate(p, g, left) == integrate(p, g, rnd));
    }
}

TEST_CASE("linearity over K[lambda]/(lambda^N)") {
    Rng rng(19);
    const RingSpec series = RingSpec::series(qq, "lambda", 3);
    for (int t = 0; t < 50; ++t) {
        int n = 1 + t % 2;
        SquareMatrix a = random_symmetric_invertible_q(rng, n);
        Poly v = random_poly(rng, qq, n, 3, 2);
        v.drop_constant_term();
        GaussianProblem p(a, v, 3);
        RingHom lift(qq, series);
        Poly g1 = base_change(lift, random_poly(rng, qq, n, 3, 2));
        Poly g2 = base_change(lift, random_poly(rng, qq, n, 3, 2));
        std::vector<RingElement> acoef, bcoef;
        for (int i = 0; i < 3; ++i) {
            acoef.push_back(qq.from_mpq(random_rational(rng)));
            bcoef.push_back(qq.from_mpq(random_rational(rng)));
        }
        RingElement alpha(series, acoef), beta(series, bcoef);
        LambdaSeries lhs = integrate(p, g1.scaled(alpha) + g2.scaled(beta));
        LambdaSeries expect(qq, 3);
        {
            LambdaSeries s1 = integrate(p, g1), s2 = integrate(p, g2);
            LambdaSeries as(qq, 3), bs(qq, 3);
            for (int i = 0; i < 3; ++i) {
                as.set_coeff(i, acoef[static_cast<size_t>(i)]);
                bs.set_coeff(i, bcoef[static_cast<size_t>(i)]);
            }
            expect = as * s1 + bs * s2;
        }
        CHECK(lhs == expect);
    }
}

TEST_CASE("Kuenneth factorization over block-diagonal problems") {
    Rng rng(23);
    for (int t = 0; t < 30; ++t) {
        SquareMatrix a1 = random_symmetric_invertible_q(rng, 1);
        SquareMatrix a2 = random_symmetric_invertible_q(rng, 1);
        SquareMatrix block(qq, 2);
        block.set(0, 0, a1.at(0, 0));
        block.set(1, 1, a2.at(0, 0));
        Poly v1 = random_poly(rng, qq, 1, 3, 1), v2 = random_poly(rng, qq, 1, 3, 1);
        v1.drop_constant_term();
        v2.drop_constant_term();
        Poly v = v1.padded(2) + v2.substitute({Poly::variable(qq, 2, 1)});
        Poly g1 = random_poly(rng, qq, 1, 3, 2), g2 = random_poly(rng, qq, 1, 3, 2);
        Poly g = g1.padded(2) * g2.substitute({Poly::variable(qq, 2, 1)});
        GaussianProblem p(block, v, 3), p1(a1, v1, 3), p2(a2, v2, 3);
        CHECK(integrate(p, g) == integrate(p1, g1) * integrate(p2, g2));
    }
}

TEST_CASE("termination: step count bounded by O(deg g * deg V^N)") {
    SquareMatrix a(qq, 1);
    a.set(0, 0, qq.from_int(-1));
    Poly v = parse_poly(qq, "x1^3 + x1^4", {"x1"});
    GaussianProblem p(a, v, 5);
    Poly g = parse_poly(qq, "x1^6", {"x1"});
    IntegrateStats stats;
    integrate(p, g, {}, &stats);
    uint64_t bound = 64ull * (1 + 6) * 1024;  // 64 (1+deg g) (deg V)^N
    CHECK(stats.steps <= bound);

    IntegrateOptions tiny;
    tiny.step_cap = 3;
    CHECK_THROWS_WITH_AS(integrate(p, g, tiny), doctest::Contains("NonTerminating"), Error);
}

TEST_CASE("torsion rings are rejected unless explicitly allowed") {
    const RingSpec z6 = RingSpec::modular(6);
    SquareMatrix a(z6, 1);
    a.set(0, 0, z6.from_int(5));  // unit mod 6
    GaussianProblem p(a, Poly::zero(z6, 1), 2);
    CHECK_THROWS_WITH_AS(integrate(p, Poly::constant(z6, 1, z6.one())),
                         doctest::Contains("TorsionRing"), Error);
    IntegrateOptions opts;
    opts.allow_torsion = true;
    CHECK(integrate(p, Poly::constant(z6, 1, z6.one()), opts) ==
          LambdaSeries::constant(z6, 2, z6.one()));
}

TEST_CASE("integrality: frozen examples and reports") {
    // n=1, A=(-1), V=x^3, g=x, N=4 -> [0, 3, 0, 135]
    SquareMatrix a(zz, 1);
    a.set(0, 0, zz.from_int(-1));
    IntegralityReport rep =
        integrality_report(a, parse_poly(zz, "x1^3", {"x1"}), parse_poly(zz, "x1", {"x1"}), 4);
    CHECK(rep.all_integer);
    CHECK(rep.paths_match);
    CHECK(rep.over_integers == series_of(zz, 4, {0, 3, 0, 135}));

    // g = x^6, V = 0 -> [15, 0, 0, ...]
    IntegralityReport rep2 =
        integrality_report(a, Poly::zero(zz, 1), parse_poly(zz, "x1^6", {"x1"}), 4);
    CHECK(rep2.over_integers == series_of(zz, 4, {15}));

    // n=2, A=((0,-1),(-1,0)), V=x1^2 x2, g=1, N=3: integer series
    SquareMatrix hyp(zz, 2);
    hyp.set(0, 1, zz.from_int(-1));
    hyp.set(1, 0, zz.from_int(-1));
    IntegralityReport rep3 = integrality_report(hyp, parse_poly(zz, "x1^2*x2", {"x1", "x2"}),
                                                Poly::constant(zz, 2, zz.one()), 3);
    CHECK(rep3.all_integer);
    CHECK(rep3.paths_match);

    // non-unimodular A is rejected with the dedicated error
    SquareMatrix bad(zz, 1);
    bad.set(0, 0, zz.from_int(2));
    CHECK_THROWS_WITH_AS(
        integrality_report(bad, Poly::zero(zz, 1), Poly::constant(zz, 1, zz.one()), 2),
        doctest::Contains("MatrixNotUnimodular"), Error);
}

TEST_CASE("V constant term is dropped with a warning flag") {
    SquareMatrix a(qq, 1);
    a.set(0, 0, qq.from_int(-1));
    GaussianProblem p(a, parse_poly(qq, "x1^3 + 5", {"x1"}), 3);
    CHECK(p.constant_dropped);
    CHECK(p.V == parse_poly(qq, "x1^3", {"x1"}));
}

TEST_CASE("base-change functoriality of the rewriting") {
    Rng rng(29);
    const RingSpec z7 = RingSpec::modular(7);
    RingHom to7(zz, z7), toq(zz, qq);
    for (int t = 0; t < 40; ++t) {
        int n = 1 + t % 2;
        SquareMatrix a = random_unimodular_symmetric_z(rng, n);
        Poly v = random_poly(rng, zz, n, 3, 2, true);
        Poly g = random_poly(rng, zz, n, 3, 2, true);
        GaussianProblem p(a, v, 3);
        LambdaSeries base = integrate(p, g);

        GaussianProblem p7(a.map(z7, [&](const RingElement& x) { return hom_apply(to7, x); }),
                           base_change(to7, v), 3);
        IntegrateOptions opts;
        opts.allow_torsion = true;
        CHECK(integrate(p7, base_change(to7, g), opts) == base.map_coefficients(to7));

        GaussianProblem pq(a.map(qq, [&](const RingElement& x) { return hom_apply(toq, x); }),
                           base_change(toq, v), 3);
        CHECK(integrate(pq, base_change(toq, g)) == base.map_coefficients(toq));
    }
}
