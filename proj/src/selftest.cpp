#include "twderham/selftest.hpp"

#include <chrono>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "twderham/constraints.hpp"
#include "twderham/dwork.hpp"
#include "twderham/families.hpp"
#include "twderham/milnor.hpp"
#include "twderham/parse.hpp"
#include "twderham/perturb.hpp"

namespace twd {

bool AcceptanceReport::all_passed() const {
    for (const auto& r : results)
        if (!r.passed) return false;
    return !results.empty();
}

namespace {

using Rng = std::mt19937_64;

mpq_class random_rational(Rng& rng, int max_num = 9, int max_den = 4) {
    std::uniform_int_distribution<int> num(-max_num, max_num), den(1, max_den);
    mpq_class q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

SquareMatrix random_symmetric_invertible_q(Rng& rng, int n) {
    const RingSpec qq = RingSpec::rationals();
    for (int attempt = 0; attempt < 200; ++attempt) {
        SquareMatrix a(qq, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                RingElement v = qq.from_mpq(random_rational(rng));
                a.set(i, j, v);
                a.set(j, i, v);
            }
        if (!a.det().is_zero()) return a;
    }
    fail("InternalError", "could not sample an invertible symmetric matrix");
}

SquareMatrix random_unimodular_symmetric_z(Rng& rng, int n) {
    const RingSpec zz = RingSpec::integers();
    std::uniform_int_distribution<int> small(-2, 2), pm(0, 1);
    SquareMatrix u(zz, n), d(zz, n);
    for (int i = 0; i < n; ++i) {
        u.set(i, i, zz.one());
        d.set(i, i, zz.from_int(pm(rng) ? 1 : -1));
        for (int j = i + 1; j < n; ++j) u.set(i, j, zz.from_int(small(rng)));
    }
    // A = U^t D U is symmetric with determinant +-1.
    SquareMatrix ut(zz, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ut.set(i, j, u.at(j, i));
    return ut * (d * u);
}

Poly random_poly(Rng& rng, const RingSpec& spec, int nvars, int max_deg, int terms,
                 bool integer_coeffs = false) {
    Poly p(spec, nvars);
    std::uniform_int_distribution<int> deg(0, max_deg);
    std::uniform_int_distribution<int> coeff(-5, 5);
    for (int t = 0; t < terms; ++t) {
        std::vector<int> e(static_cast<size_t>(nvars), 0);
        int budget = deg(rng);
        for (int i = 0; i < nvars && budget > 0; ++i) {
            std::uniform_int_distribution<int> part(0, budget);
            e[static_cast<size_t>(i)] = part(rng);
            budget -= e[static_cast<size_t>(i)];
        }
        mpq_class c = integer_coeffs ? mpq_class(coeff(rng)) : random_rational(rng, 5, 3);
        if (c == 0) c = 1;
        p.add_term(Monomial(std::move(e)), spec.from_mpq(c));
    }
    return p;
}

std::vector<Monomial> all_monomials_up_to(int nvars, int max_deg) {
    std::vector<Monomial> out;
    std::vector<int> e(static_cast<size_t>(nvars), 0);
    std::function<void(int, int)> rec = [&](int var, int remaining) {
        if (var == nvars) {
            out.emplace_back(e);
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            e[static_cast<size_t>(var)] = k;
            rec(var + 1, remaining - k);
        }
        e[static_cast<size_t>(var)] = 0;
    };
    rec(0, max_deg);
    return out;
}

struct Ctx {
    const AcceptanceConfig& cfg;
    Rng rng;
    std::ostringstream detail;
    bool ok = true;

    void require(bool cond, const std::string& msg) {
        if (!cond && ok) {
            ok = false;
            detail << msg;
        }
    }
};

// --- criterion bodies -------------------------------------------------------

void crit_wick(Ctx& c) {
    const RingSpec qq = RingSpec::rationals();
    int matrices = c.cfg.full_scale ? 25 : 5;
    int max_deg = c.cfg.full_scale ? 8 : 5;
    long checked = 0;
    for (int t = 0; t < matrices && c.ok; ++t) {
        int n = 1 + t % 3;
        SquareMatrix a = random_symmetric_invertible_q(c.rng, n);
        Poly v = (t % 2) ? random_poly(c.rng, qq, n, 3, 2) : Poly::zero(qq, n);
        v.drop_constant_term();
        GaussianProblem p(a, v, 2);
        for (const Monomial& m : all_monomials_up_to(n, max_deg)) {
            LambdaSeries s = integrate(p, Poly::from_monomial(qq, m, qq.one()));
            RingElement w = wick_oracle(a, m);
            ++checked;
            c.require(s.coeff(0) == w, "lambda^0 != Wick for " + m.str(Poly::default_names(n)));
            if (!c.ok) return;
        }
    }
    c.detail << checked << " monomial/matrix pairs";
}

void crit_integrality(Ctx& c) {
    const RingSpec zz = RingSpec::integers();
    int cases = c.cfg.full_scale ? 20 : 5;
    int order = c.cfg.full_scale ? 8 : 4;
    for (int t = 0; t < cases && c.ok; ++t) {
        int n = 1 + t % 2;
        SquareMatrix a = random_unimodular_symmetric_z(c.rng, n);
        Poly v = random_poly(c.rng, zz, n, 4, 3, true);
        Poly g = random_poly(c.rng, zz, n, 4, 3, true);
        IntegralityReport rep = integrality_report(a, v, g, order);
        c.require(rep.all_integer, "non-integer coefficient in case " + std::to_string(t));
        c.require(rep.paths_match, "Z and Q paths disagree in case " + std::to_string(t));
    }
    if (c.ok) c.detail << cases << " random unimodular problems, N=" << order;
}

void crit_vanishing(Ctx& c) {
    const RingSpec qq = RingSpec::rationals();
    int cases = c.cfg.full_scale ? 500 : 50;
    for (int t = 0; t < cases && c.ok; ++t) {
        int n = 1 + t % 2;
        SquareMatrix a = random_symmetric_invertible_q(c.rng, n);
        Poly v = random_poly(c.rng, qq, n, 3, 2);
        v.drop_constant_term();
        GaussianProblem p(a, v, 4);
        Poly h = random_poly(c.rng, qq, n, 3, 3);
        int var = static_cast<int>(c.rng() % static_cast<uint64_t>(n));
        LambdaSeries s = check_vanishing(p, h, var);
        c.require(s.is_zero(), "I(d_a h + (d_a f) h) != 0 in case " + std::to_string(t));
    }
    if (c.ok) c.detail << cases << " random (h, a, A, V) instances";
}

void crit_quadratic(Ctx& c) {
    const RingSpec zz = RingSpec::integers();
    const RingSpec zl = RingSpec::series(zz, "lambda", 4);
    int cases = c.cfg.full_scale ? 10 : 3;
    int cap = c.cfg.full_scale ? 4 : 3;
    for (int t = 0; t < cases && c.ok; ++t) {
        int n = 1 + t % 3;
        SquareMatrix a = random_unimodular_symmetric_z(c.rng, n);
        QuadraticRankReport rep = quadratic_rank_check(a, cap);
        c.require(rep.ok, "Z case " + std::to_string(t) + " failed");
        // Same matrix with a lambda-linear symmetric bump stays invertible
        // over Z[lambda]/(lambda^4).
        RingHom lift(zz, zl);
        SquareMatrix al = a.map(zl, [&](const RingElement& x) { return hom_apply(lift, x); });
        std::uniform_int_distribution<int> small(-2, 2);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                std::vector<RingElement> coeffs(4, zz.zero());
                coeffs[1] = zz.from_int(small(c.rng));
                RingElement bump(zl, coeffs);
                al.set(i, j, al.at(i, j) + bump);
                if (i != j) al.set(j, i, al.at(i, j));
            }
        QuadraticRankReport repl = quadratic_rank_check(al, cap);
        c.require(repl.ok, "Z[lambda]/(lambda^4) case " + std::to_string(t) + " failed");
        c.require(repl.volume_class.is_one(), "volume class != 1 over the series ring");
    }
    if (c.ok) c.detail << cases << " matrices over ZZ and over Z[lambda]/(lambda^4), degree cap " << cap;
}

void crit_milnor_numbers(Ctx& c) {
    const RingSpec qq = RingSpec::rationals();
    for (int d = 1; d <= 9 && c.ok; ++d) {
        Poly f = Poly::from_monomial(qq, Monomial::var(1, 0, d + 1),
                                     qq.from_mpq(mpq_class(1, d + 1)));
        c.require(milnor_basis(f).mu() == d, "mu(x^" + std::to_string(d + 1) + ") != " + std::to_string(d));
    }
    {
        Poly f = parse_poly(qq, "x1^3 + x2^3", {"x1", "x2"});
        c.require(milnor_basis(f).mu() == 4, "mu(x^3+y^3) != 4");
        Poly g = parse_poly(qq, "x1^3 + x2^4", {"x1", "x2"});
        c.require(milnor_basis(g).mu() == 6, "mu(x^3+y^4) != 6");
    }
    int cases = c.cfg.full_scale ? 10 : 3;
    std::uniform_int_distribution<int> dd(2, 4);
    for (int t = 0; t < cases && c.ok; ++t) {
        // Disjoint-variable sums: mu multiplies (Kuenneth).
        int d1 = dd(c.rng), d2 = dd(c.rng);
        Poly f1 = Poly::from_monomial(qq, Monomial::var(1, 0, d1 + 1), qq.one()) +
                  random_poly(c.rng, qq, 1, d1 - 1, 1);
        Poly f2 = Poly::from_monomial(qq, Monomial::var(1, 0, d2 + 1), qq.one()) +
                  random_poly(c.rng, qq, 1, d2 - 1, 1);
        int m1, m2;
        try {
            m1 = milnor_basis(f1).mu();
            m2 = milnor_basis(f2).mu();
        } catch (const Error&) {
            --t;
            continue;
        }
        Poly sum = f1.padded(2) + f2.substitute({Poly::variable(qq, 2, 1)});
        c.require(milnor_basis(sum).mu() == m1 * m2,
                  "Kuenneth product law failed in case " + std::to_string(t));
    }
    if (c.ok) c.detail << "pure powers d=1..9, two reference values, " << cases << " Kuenneth sums";
}

void crit_certified_reduction(Ctx& c) {
    const RingSpec qq = RingSpec::rationals();
    int cases = c.cfg.full_scale ? 200 : 30;
    std::uniform_int_distribution<int> dd(2, 4);
    int done = 0, attempts = 0;
    while (done < cases && c.ok && attempts < cases * 10) {
        ++attempts;
        int n = 1 + static_cast<int>(c.rng() % 2);
        Poly f(qq, n);
        for (int i = 0; i < n; ++i)
            f = f + Poly::from_monomial(qq, Monomial::var(n, i, dd(c.rng) + 1), qq.one());
        f = f + random_poly(c.rng, qq, n, 2, 2);
        MilnorData md;
        try {
            md = milnor_basis(f);
        } catch (const Error&) {
            continue;
        }
        if (md.mu() == 0) continue;
        Poly g = random_poly(c.rng, qq, n, 4, 3);
        auto coords = reduce_nform(md, g);
        exactness_witness(md, g, coords);  // throws unless the identity expands to zero
        ++done;
    }
    c.require(done == cases, "only " + std::to_string(done) + " instances certified");
    if (c.ok) c.detail << done << " certified reductions";
}

void crit_picard_fuchs(Ctx& c) {
    const RingSpec qq = RingSpec::rationals();
    std::vector<std::string> xv{"x1", "lambda"};
    {
        FamilyProblem airy(parse_poly(qq, "x1^3/3 - lambda*x1", xv), c.cfg.seed);
        PicardFuchsOperator op = picard_fuchs(airy, parse_poly(qq, "1", xv));
        bool match = op.order() == 2 && op.coeffs[2] == UniPolyQ::constant(1) &&
                     op.coeffs[1].is_zero() && op.coeffs[0] == -UniPolyQ::variable();
        c.require(match, "Airy operator mismatch: got " + op.str());
    }
    {
        FamilyProblem gauss(parse_poly(qq, "-lambda*x1^2/2", xv), c.cfg.seed);
        PicardFuchsOperator op = picard_fuchs(gauss, parse_poly(qq, "1", xv));
        bool match = op.order() == 1 && op.coeffs[1] == UniPolyQ::variable().scaled(2) &&
                     op.coeffs[0] == UniPolyQ::constant(1);
        c.require(match, "quadratic family operator mismatch: got " + op.str());
    }
    if (c.ok) c.detail << "Airy D^2 - lambda and 2 lambda D + 1 recovered";
}

void crit_constraints(Ctx& c) {
    const RingSpec qq = RingSpec::rationals();
    int cases = c.cfg.full_scale ? 200 : 30;
    for (int t = 0; t < cases && c.ok; ++t) {
        int n = 1 + t % 3;
        Poly p = random_poly(c.rng, qq, n, 3, 3);
        if (p.is_constant()) {
            --t;
            continue;
        }
        Form omega(qq, n);
        std::uniform_int_distribution<int> mask(0, (1 << n) - 1);
        omega.add_component(static_cast<uint64_t>(mask(c.rng)), random_poly(c.rng, qq, n, 3, 2));
        DeltaChainReport rep = delta_chain_check(p, omega);
        c.require(rep.ok, "chain-map certification failed in case " + std::to_string(t));
    }
    // Degree shift +2m.
    for (int t = 0; t < (c.cfg.full_scale ? 20 : 5) && c.ok; ++t) {
        int n = 2, m = 1 + t % 2;
        std::vector<Poly> cs;
        for (int i = 0; i < m; ++i) {
            Poly ci = random_poly(c.rng, qq, n, 2, 2);
            if (ci.is_constant()) ci = ci + Poly::variable(qq, n, i % n);
            cs.push_back(ci);
        }
        ConstraintProblem cp(random_poly(c.rng, qq, n, 2, 2), cs, c.cfg.seed + t);
        int k = t % (n + 1);
        Form omega(qq, n);
        uint64_t mask_bits = (uint64_t(1) << k) - 1;
        omega.add_component(mask_bits, random_poly(c.rng, qq, n, 2, 2));
        Form image = codim_m_map(cp, omega);
        if (!image.is_zero())
            c.require(image.is_homogeneous(k + 2 * m),
                      "degree shift violated for m=" + std::to_string(m));
    }
    if (c.ok) c.detail << cases << " chain-map certifications and degree-shift checks";
}

void crit_frobenius(Ctx& c) {
    for (int p : {3, 5, 7, 11}) {
        RingSpec ring = RingSpec::pi_adic(p, 8);
        RingElement::PiAdicPayload pay;
        pay.c.assign(static_cast<size_t>(p - 1), mpz_class(0));
        pay.c[1 % (p - 1)] = 1;
        RingElement pi(ring, pay);
        RingElement pw = ring.one();
        for (int k = 0; k < p - 1; ++k) pw *= pi;
        c.require(pw == ring.from_int(-p), "pi^{p-1} != -p at p=" + std::to_string(p));
    }
    {
        const int p = 3, d = c.cfg.full_scale ? 40 : 20;
        RingSpec ring = RingSpec::pi_adic(p, 20);
        TruncSeries theta = dwork_theta(ring, d);
        c.require(theta.coeff(0).is_one(), "theta(0) != 1");
        mpq_class bound_slope(p - 1, p * p);
        for (int i = 1; i <= d && c.ok; ++i) {
            auto v = pi_adic_valuation(theta.coeff(i));
            if (!v) continue;  // zero to precision: consistent with any slope
            mpq_class lower = bound_slope * i;
            lower.canonicalize();
            c.require(*v >= lower, "theta slope bound fails at degree " + std::to_string(i));
        }
    }
    std::vector<int> primes = c.cfg.full_scale ? std::vector<int>{3, 5, 7} : std::vector<int>{3, 5};
    int nn = c.cfg.full_scale ? 20 : 12;
    int dd = c.cfg.full_scale ? 60 : 24;
    const RingSpec qq = RingSpec::rationals();
    Poly f = parse_poly(qq, "x1^2/2", {"x1"});
    for (int p : primes) {
        if (!c.ok) break;
        RingSpec ring = RingSpec::pi_adic(p, nn);
        FrobeniusEigenvalue ev = frobenius_eigenvalue(ring, f, dd);
        c.require(ev.valuation == mpq_class(1, 2), "v(alpha) != 1/2 at p=" + std::to_string(p));
        c.require(ev.precision_ok, "precision horizon too small at p=" + std::to_string(p));
        int sign = ((p - 1) / 2) % 2 ? -1 : 1;
        RingElement target = ring.from_int(sign * p);
        c.require(pi_adic_congruent(ev.alpha_squared, target, ev.squared_horizon),
                  "alpha^2 != " + std::to_string(sign * p) + " at p=" + std::to_string(p));
    }
    if (c.ok)
        c.detail << "pi relation at p in {3,5,7,11}, theta slope at p=3, Gauss eigenvalues at p in {"
                 << (c.cfg.full_scale ? "3,5,7}" : "3,5}");
}

void crit_functoriality(Ctx& c) {
    const RingSpec zz = RingSpec::integers();
    const RingSpec qq = RingSpec::rationals();
    const RingSpec z7 = RingSpec::modular(7);
    int cases = c.cfg.full_scale ? 100 : 20;
    RingHom to_q(zz, qq), to_7(zz, z7);
    for (int t = 0; t < cases && c.ok; ++t) {
        int n = 1 + t % 2;
        SquareMatrix a = random_unimodular_symmetric_z(c.rng, n);
        Poly v = random_poly(c.rng, zz, n, 3, 2, true);
        Poly g = random_poly(c.rng, zz, n, 3, 2, true);
        GaussianProblem pz(a, v, 4);
        LambdaSeries base = integrate(pz, g);

        GaussianProblem pq(a.map(qq, [&](const RingElement& x) { return hom_apply(to_q, x); }),
                           base_change(to_q, v), 4);
        c.require(integrate(pq, base_change(to_q, g)) == base.map_coefficients(to_q),
                  "Z -> Q commutation failed in case " + std::to_string(t));

        GaussianProblem p7(a.map(z7, [&](const RingElement& x) { return hom_apply(to_7, x); }),
                           base_change(to_7, v), 4);
        IntegrateOptions opts;
        opts.allow_torsion = true;
        c.require(integrate(p7, base_change(to_7, g), opts) == base.map_coefficients(to_7),
                  "Z -> Z/7 commutation failed in case " + std::to_string(t));
    }
    if (c.ok) c.detail << cases << " instances, Z->Q and Z->Z/7";
}

struct Criterion {
    int index;
    const char* name;
    double budget_seconds;  // from the acceptance criteria; 0 = none stated
    void (*run)(Ctx&);
};

const Criterion kCriteria[] = {
    {1, "wick-equivalence", 60, crit_wick},
    {2, "integrality", 120, crit_integrality},
    {3, "vanishing-relation", 60, crit_vanishing},
    {4, "quadratic-proposition", 0, crit_quadratic},
    {5, "milnor-numbers", 0, crit_milnor_numbers},
    {6, "certified-reduction", 0, crit_certified_reduction},
    {7, "picard-fuchs", 30, crit_picard_fuchs},
    {8, "constraint-maps", 0, crit_constraints},
    {9, "frobenius", 120, crit_frobenius},
    {10, "functoriality", 0, crit_functoriality},
};

}  // namespace

AcceptanceReport run_acceptance(const AcceptanceConfig& cfg, std::ostream* live) {
    AcceptanceReport report;
    auto t_start = std::chrono::steady_clock::now();
    for (const Criterion& crit : kCriteria) {
        if (!cfg.only.empty() && std::string(crit.name).find(cfg.only) == std::string::npos)
            continue;
        CriterionResult res;
        res.index = crit.index;
        res.name = crit.name;

        auto elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - t_start)
                              .count();
        if (cfg.time_budget_ms > 0 && elapsed_ms >= cfg.time_budget_ms) {
            res.passed = false;
            res.detail = "skipped: time budget exhausted";
            report.results.push_back(res);
            if (live)
                *live << "[FAIL] " << res.index << " " << res.name << ": " << res.detail << "\n";
            continue;
        }

        Ctx ctx{cfg, Rng(cfg.seed * 1000003ull + static_cast<uint64_t>(crit.index)), {}, true};
        auto t0 = std::chrono::steady_clock::now();
        try {
            crit.run(ctx);
        } catch (const Error& e) {
            ctx.ok = false;
            ctx.detail.str(std::string());
            ctx.detail << "error " << e.what();
        }
        res.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        res.passed = ctx.ok;
        if (cfg.full_scale && crit.budget_seconds > 0 && res.seconds > crit.budget_seconds) {
            res.passed = false;
            ctx.detail << " [runtime budget " << crit.budget_seconds << "s exceeded]";
        }
        res.detail = ctx.detail.str();
        report.results.push_back(res);
        if (live) {
            *live << (res.passed ? "[PASS] " : "[FAIL] ") << res.index << " " << res.name << " ("
                  << res.seconds << "s)" << (res.detail.empty() ? "" : ": " + res.detail) << "\n";
        }
    }
    return report;
}

}  // namespace twd
