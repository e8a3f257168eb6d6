#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "twderham/form.hpp"
#include "twderham/parse.hpp"

using namespace twd;
using namespace twd::testing;

namespace {
const RingSpec qq = RingSpec::rationals();
const RingSpec zz = RingSpec::integers();
}  // namespace

TEST_CASE("degrevlex order") {
    // x1 > x2 in degrevlex with equal degree; degree dominates.
    Monomial x1 = Monomial::var(2, 0), x2 = Monomial::var(2, 1);
    CHECK(Monomial::degrevlex_less(x2, x1));
    CHECK_FALSE(Monomial::degrevlex_less(x1, x2));
    CHECK(Monomial::degrevlex_less(x1, x1 * x2));
    // classic degrevlex tie-break: x1*x3 < x2^2 (last nonzero of diff negative)
    Monomial x1x3({1, 0, 1}), x2sq({0, 2, 0});
    CHECK(Monomial::degrevlex_less(x1x3, x2sq));
}

TEST_CASE("polynomial arithmetic and degree sentinel") {
    Poly x = Poly::variable(qq, 2, 0), y = Poly::variable(qq, 2, 1);
    Poly p = (x + y) * (x - y);
    CHECK(p == x * x - y * y);
    CHECK(Poly::zero(qq, 2).total_degree() == Poly::kZeroDegree);
    CHECK(p.total_degree() == 2);
    CHECK((p - p).is_zero());
    CHECK(p.derivative(0) == x + x);

    // substitution/eval agree
    std::vector<RingElement> pt{qq.from_int(3), qq.from_int(2)};
    CHECK(p.eval(pt) == qq.from_int(5));
}

TEST_CASE("exterior derivative: hand examples") {
    // d(xy) = y dx + x dy
    Poly xy = parse_poly(qq, "x1*x2", {"x1", "x2"});
    Form d = de_rham_d(Form::from_poly(xy));
    CHECK(d.component(0b01) == Poly::variable(qq, 2, 1));
    CHECK(d.component(0b10) == Poly::variable(qq, 2, 0));

    // d(y dx) = -dx^dy stored as (-1) on dx_{1,2}
    Form ydx = wedge(Form::from_poly(Poly::variable(qq, 2, 1)), Form::differential(qq, 2, 0));
    CHECK(de_rham_d(ydx).component(0b11) == Poly::constant(qq, 2, qq.from_int(-1)));

    // d(d(x^3 y + y^2 x)) = 0
    Poly g = parse_poly(qq, "x1^3*x2 + x2^2*x1", {"x1", "x2"});
    CHECK(de_rham_d(de_rham_d(Form::from_poly(g))).is_zero());
}

TEST_CASE("wedge: orientation and nilpotence") {
    Form dx = Form::differential(qq, 2, 0), dy = Form::differential(qq, 2, 1);
    CHECK(wedge(dx, dy).component(0b11) == Poly::constant(qq, 2, qq.one()));
    CHECK(wedge(dy, dx).component(0b11) == Poly::constant(qq, 2, qq.from_int(-1)));
    CHECK(wedge(dx, dx).is_zero());
}

TEST_CASE("graded anticommutativity on random homogeneous forms") {
    Rng rng(5);
    for (int t = 0; t < 200; ++t) {
        int n = 3;
        Form a = random_form(rng, qq, n, 3), b = random_form(rng, qq, n, 3);
        auto da = a.degree(), db = b.degree();
        if (!da || !db) continue;
        Form ab = wedge(a, b), ba = wedge(b, a);
        if ((*da * *db) % 2)
            CHECK(ab == -ba);
        else
            CHECK(ab == ba);
    }
}

TEST_CASE("twisted differential: hand examples") {
    // f = x^2/2 on one variable: d_f(1) = x dx
    Poly f = parse_poly(qq, "x1^2/2", {"x1"});
    TwistedComplex complex(f);
    Form one = Form::from_poly(Poly::constant(qq, 1, qq.one()));
    CHECK(twisted_d(complex, one).component(0b1) == Poly::variable(qq, 1, 0));

    // f = x^3/3: d_f(1) = x^2 dx
    TwistedComplex cubic(parse_poly(qq, "x1^3/3", {"x1"}));
    CHECK(twisted_d(cubic, one).component(0b1) == parse_poly(qq, "x1^2", {"x1"}));

    // any f kills the volume form
    Rng rng(17);
    for (int t = 0; t < 20; ++t) {
        int n = 1 + t % 3;
        TwistedComplex c(random_poly(rng, qq, n, 4, 3));
        CHECK(twisted_d(c, Form::volume(qq, n)).is_zero());
    }
}

TEST_CASE("d^2 = 0 and d_f^2 = 0 on random forms") {
    Rng rng(29);
    for (int t = 0; t < 1000; ++t) {
        int n = 1 + t % 4;
        Form omega = random_form(rng, qq, n, 5);
        CHECK(de_rham_d(de_rham_d(omega)).is_zero());
        TwistedComplex c(random_poly(rng, qq, n, 6, 3));
        CHECK(twisted_d(c, twisted_d(c, omega)).is_zero());
    }
}

TEST_CASE("twisted complex accepts a closed one-form and rejects others") {
    // df for f = x1 x2 handed over directly
    Form df(qq, 2);
    df.add_component(0b01, Poly::variable(qq, 2, 1));
    df.add_component(0b10, Poly::variable(qq, 2, 0));
    TwistedComplex c(df);
    CHECK(twisted_d(c, Form::from_poly(Poly::constant(qq, 2, qq.one()))) == df);

    Form bad(qq, 2);
    bad.add_component(0b01, Poly::variable(qq, 2, 0) * Poly::variable(qq, 2, 1));
    CHECK_THROWS_WITH_AS(TwistedComplex{bad}, doctest::Contains("NotClosed"), Error);
}

TEST_CASE("Leibniz rule on random homogeneous forms") {
    Rng rng(31);
    for (int t = 0; t < 300; ++t) {
        int n = 2 + t % 2;
        Form a = random_form(rng, qq, n, 3), b = random_form(rng, qq, n, 3);
        auto da = a.degree();
        if (!da) continue;
        Form lhs = de_rham_d(wedge(a, b));
        Form rhs = wedge(de_rham_d(a), b);
        Form second = wedge(a, de_rham_d(b));
        rhs = (*da % 2) ? rhs - second : rhs + second;
        CHECK(lhs == rhs);
    }
}

TEST_CASE("pullback: hand examples") {
    // phi(u) = u^2 pulls dx back to 2u du
    Poly phi1 = parse_poly(qq, "x1^2", {"x1"});
    Form dx = Form::differential(qq, 1, 0);
    Form pulled = pullback({phi1}, dx);
    CHECK(pulled.component(0b1) == parse_poly(qq, "2*x1", {"x1"}));

    // identity pullback
    Rng rng(37);
    std::vector<Poly> id{Poly::variable(qq, 2, 0), Poly::variable(qq, 2, 1)};
    for (int t = 0; t < 20; ++t) {
        Form omega = random_form(rng, qq, 2, 3);
        CHECK(pullback(id, omega) == omega);
    }
}

TEST_CASE("pullback is a chain map for the twisted differential") {
    // phi(u,v) = (u+v, uv), omega = x1 dx2, f = x1
    std::vector<std::string> uv{"x1", "x2"};
    std::vector<Poly> phi{parse_poly(qq, "x1 + x2", uv), parse_poly(qq, "x1*x2", uv)};
    Form omega = wedge(Form::from_poly(Poly::variable(qq, 2, 0)), Form::differential(qq, 2, 1));
    Poly f = Poly::variable(qq, 2, 0);

    TwistedComplex cf(f);
    TwistedComplex cf_phi(f.substitute(phi));
    CHECK(pullback(phi, twisted_d(cf, omega)) == twisted_d(cf_phi, pullback(phi, omega)));

    // random chain-map and functoriality checks
    Rng rng(41);
    for (int t = 0; t < 100; ++t) {
        std::vector<Poly> map1{random_poly(rng, qq, 2, 2, 2), random_poly(rng, qq, 2, 2, 2)};
        std::vector<Poly> map2{random_poly(rng, qq, 2, 2, 2), random_poly(rng, qq, 2, 2, 2)};
        Form w = random_form(rng, qq, 2, 2);
        Poly g = random_poly(rng, qq, 2, 2, 2);
        TwistedComplex cg(g);
        TwistedComplex cg_pull(g.substitute(map1));
        CHECK(pullback(map1, twisted_d(cg, w)) == twisted_d(cg_pull, pullback(map1, w)));
        // (phi o psi)^* = psi^* o phi^*
        std::vector<Poly> composed{map1[0].substitute(map2), map1[1].substitute(map2)};
        CHECK(pullback(composed, w) == pullback(map2, pullback(map1, w)));
    }
}

TEST_CASE("base change on forms") {
    RingHom to5(zz, RingSpec::modular(5));
    Form omega(zz, 1);
    omega.add_component(0b1, parse_poly(zz, "7*x1 + 3", {"x1"}));
    Form mapped = base_change(to5, omega);
    CHECK(mapped.component(0b1) == parse_poly(RingSpec::modular(5), "2*x1 + 3", {"x1"}));

    // base_change commutes with d and d_f
    Rng rng(43);
    RingHom to7(zz, RingSpec::modular(7));
    for (int t = 0; t < 200; ++t) {
        int n = 1 + t % 3;
        Form w(zz, n);
        w.add_component(static_cast<uint64_t>(rng() % (1u << n)),
                        random_poly(rng, zz, n, 4, 3, true));
        CHECK(base_change(to7, de_rham_d(w)) == de_rham_d(base_change(to7, w)));
        Poly f = random_poly(rng, zz, n, 4, 3, true);
        TwistedComplex cz(f);
        TwistedComplex c7(base_change(to7, f));
        CHECK(base_change(to7, twisted_d(cz, w)) == twisted_d(c7, base_change(to7, w)));
    }
}

TEST_CASE("interior product and Lie derivative interplay") {
    // Cartan-style identity d(i_eta w) + i_eta(dw) = L_eta w, with L defined
    // independently as a derivation.
    Rng rng(47);
    for (int t = 0; t < 200; ++t) {
        int n = 2 + t % 2;
        std::vector<Poly> eta;
        for (int i = 0; i < n; ++i) eta.push_back(random_poly(rng, qq, n, 3, 2));
        Form w = random_form(rng, qq, n, 3);
        Form lhs = de_rham_d(w.contract(eta)) + de_rham_d(w).contract(eta);
        CHECK(lhs == w.lie_derivative(eta));
    }
}
