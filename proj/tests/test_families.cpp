#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "twderham/families.hpp"
#include "twderham/parse.hpp"

using namespace twd;
using namespace twd::testing;

namespace {
const RingSpec qq = RingSpec::rationals();
const std::vector<std::string> x_lam{"x1", "lambda"};

RingElement ff_rational(const RingSpec& ff, const mpq_class& q) { return ff.from_mpq(q); }
}  // namespace

TEST_CASE("gauss-manin connection: hand examples") {
    // f = -lambda x^2/2, class [dx]: nabla [dx] = -1/(2 lambda) [dx]
    FamilyProblem gauss(parse_poly(qq, "-lambda*x1^2/2", x_lam));
    CHECK(gauss.generic_mu == 1);
    const RingSpec& ff = gauss.f_ff.spec();
    auto nabla = gm_connection_apply(gauss, {ff.one()});
    RingElement expect(ff, RingElement::RatFunPayload{
                               UniPolyQ::constant(mpq_class(-1, 2)), UniPolyQ::variable()});
    CHECK(nabla == std::vector<RingElement>{expect});

    // f = x^3/3 - lambda x, class [dx]: nabla [dx] = [-x dx] = (0, -1)
    FamilyProblem airy(parse_poly(qq, "x1^3/3 - lambda*x1", x_lam));
    CHECK(airy.generic_mu == 2);
    const RingSpec& ffa = airy.f_ff.spec();
    auto na = gm_connection_apply(airy, {ffa.one(), ffa.zero()});
    CHECK(na == std::vector<RingElement>{ffa.zero(), -ffa.one()});

    // lambda-independent f: nabla kills lambda-free classes
    FamilyProblem constant(parse_poly(qq, "x1^3/3 - x1 + 0*lambda + lambda*0", x_lam), 1);
    // (the parser needs lambda somewhere; 0*lambda keeps it absent from f)
    auto nc = gm_connection_apply(constant, {constant.f_ff.spec().one(),
                                             constant.f_ff.spec().zero()});
    for (const auto& c : nc) CHECK(c.is_zero());
}

TEST_CASE("connection is a derivation against lambda multiplication") {
    FamilyProblem airy(parse_poly(qq, "x1^3/3 - lambda*x1", x_lam));
    const RingSpec& ff = airy.f_ff.spec();
    Rng rng(3);
    for (int t = 0; t < 30; ++t) {
        // random class coordinates and a random rational function p(lambda)
        std::vector<RingElement> c{ff_rational(ff, random_rational(rng)),
                                   ff_rational(ff, random_rational(rng))};
        std::vector<mpq_class> pc;
        for (int i = 0; i <= 2; ++i) pc.push_back(random_rational(rng));
        RingElement p(ff, RingElement::RatFunPayload{UniPolyQ(pc), UniPolyQ::constant(1)});
        std::vector<RingElement> scaled{p * c[0], p * c[1]};
        auto lhs = gm_connection_apply(airy, scaled);
        auto base = gm_connection_apply(airy, c);
        for (size_t i = 0; i < lhs.size(); ++i)
            CHECK(lhs[i] == p.derivative() * c[i] + p * base[i]);
    }
}

TEST_CASE("picard-fuchs: Airy operator D^2 - lambda") {
    FamilyProblem airy(parse_poly(qq, "x1^3/3 - lambda*x1", x_lam));
    PicardFuchsOperator op = picard_fuchs(airy, parse_poly(qq, "1", x_lam));
    REQUIRE(op.order() == 2);
    CHECK(op.coeffs[0] == -UniPolyQ::variable());
    CHECK(op.coeffs[1].is_zero());
    CHECK(op.coeffs[2] == UniPolyQ::constant(1));
}

TEST_CASE("picard-fuchs: 2 lambda D + 1 for the quadratic family") {
    FamilyProblem gauss(parse_poly(qq, "-lambda*x1^2/2", x_lam));
    PicardFuchsOperator op = picard_fuchs(gauss, parse_poly(qq, "1", x_lam));
    REQUIRE(op.order() == 1);
    CHECK(op.coeffs[0] == UniPolyQ::constant(1));
    CHECK(op.coeffs[1] == UniPolyQ::variable().scaled(2));
}

TEST_CASE("picard-fuchs: shifted Airy seed passes the internal zero check") {
    FamilyProblem airy(parse_poly(qq, "x1^3/3 - lambda*x1", x_lam));
    PicardFuchsOperator op = picard_fuchs(airy, parse_poly(qq, "x1", x_lam));
    CHECK(op.order() == 2);  // derivative-shifted Airy periods stay order two
    // the internal verification (sum p_i nabla^i c0 = 0) ran inside
}

TEST_CASE("vertical vector fields act trivially on classes") {
    FamilyProblem airy(parse_poly(qq, "x1^3/3 - lambda*x1", x_lam));
    Rng rng(5);
    const RingSpec& ff = airy.f_ff.spec();
    for (int t = 0; t < 25; ++t) {
        // eta = a(x, lambda) d/dx; (L_eta + eta(f)) g dx reduces to zero
        Poly eta = random_poly(rng, qq, 2, 2, 2);
        Poly g = random_poly(rng, qq, 2, 2, 2);
        Poly image_xl = eta * g.derivative(0) + eta.derivative(0) * g +
                        eta * airy.f_q.derivative(0) * g;
        Poly image_ff = to_function_field(image_xl, 1);
        for (const auto& c : reduce_nform(airy.generic, image_ff)) CHECK(c.is_zero());
    }
}

TEST_CASE("lift independence: anticommutator identity expands to zero") {
    FamilyProblem fam(parse_poly(qq, "x1^3/3 + x2^2/2 - lambda*x1", {"x1", "x2", "lambda"}));
    Rng rng(7);

    // eta = d/dx1 against the fiber volume form: special case first
    {
        std::vector<Poly> eta{Poly::constant(qq, 3, qq.one()), Poly::zero(qq, 3)};
        Form vol(qq, 3);
        vol.add_component(0b011, Poly::constant(qq, 3, qq.one()));
        auto rep = lift_independence_check(fam, eta, vol);
        CHECK(rep.ok);
    }
    // eta = 0
    {
        std::vector<Poly> eta{Poly::zero(qq, 3), Poly::zero(qq, 3)};
        Form omega(qq, 3);
        omega.add_component(0b001, random_poly(rng, qq, 3, 2, 2));
        auto rep = lift_independence_check(fam, eta, omega);
        CHECK(rep.ok);
        CHECK(rep.lhs.is_zero());
    }
    // random polynomial eta and omega
    for (int t = 0; t < 25; ++t) {
        std::vector<Poly> eta{random_poly(rng, qq, 3, 2, 2), random_poly(rng, qq, 3, 2, 2)};
        Form omega(qq, 3);
        omega.add_component(static_cast<uint64_t>(rng() % 4), random_poly(rng, qq, 3, 2, 2));
        auto rep = lift_independence_check(fam, eta, omega);
        CHECK(rep.ok);
    }
}

TEST_CASE("genericity failures are rejected") {
    // f = (lambda x)^2 degenerates for every lambda (non-isolated at 0 only
    // when lambda = 0, but mu jumps): x^2 lambda^2 has mu 1 generically; at
    // lambda = 0 the fiber is 0. The constructor must reject constant-zero
    // fibers when sampled; use a family that is identically degenerate:
    CHECK_THROWS_WITH_AS(FamilyProblem(parse_poly(qq, "x1 + lambda", x_lam)),
                         doctest::Contains("GenericityFailure"), Error);
    // x1^2 x2^2 type: non-isolated for all lambda
    CHECK_THROWS_WITH_AS(
        FamilyProblem(parse_poly(qq, "(x1*x2)^2 - lambda*x1", {"x1", "x2", "lambda"})),
        doctest::Contains("GenericityFailure"), Error);
}

TEST_CASE("function field conversion round trip") {
    Poly f = parse_poly(qq, "x1^3/3 - lambda*x1 + lambda^2*x1^2", x_lam);
    Poly ff = to_function_field(f, 1);
    CHECK(ff.nvars() == 1);
    // coefficient of x1 is -lambda, of x1^2 is lambda^2, of x1^3 is 1/3
    RingElement e1 = ff.coefficient(Monomial::var(1, 0, 1));
    CHECK(e1.rat_fun().num == UniPolyQ({mpq_class(0), mpq_class(-1)}));
    RingElement e2 = ff.coefficient(Monomial::var(1, 0, 2));
    CHECK(e2.rat_fun().num == UniPolyQ({mpq_class(0), mpq_class(0), mpq_class(1)}));
}
