#include "twderham/milnor.hpp"

#include <algorithm>
#include <deque>

namespace twd {

// ---------------------------------------------------------------------------
// Groebner machinery

bool GroebnerBasis::contains_unit() const {
    for (const auto& e : elems)
        if (!e.p.is_zero() && e.p.leading_term().first.is_one()) return true;
    return false;
}

namespace {

/// One division step: subtract (t / LT(d)) * d from p, updating cofactors.
/// Returns true when some leading-reducible term existed.
struct Divider {
    const GroebnerBasis& gb;

    /// Full division: p = r + sum_i q_i * elems[i].p with no term of r
    /// divisible by any leading term.
    Poly divide(Poly p, std::vector<Poly>* q_out) const {
        const RingSpec& spec = p.spec();
        int nv = p.nvars();
        std::vector<Poly> q(gb.elems.size(), Poly::zero(spec, nv));
        Poly r(spec, nv);
        while (!p.is_zero()) {
            const auto& [lm, lc] = p.leading_term();
            bool reduced = false;
            for (size_t i = 0; i < gb.elems.size(); ++i) {
                const Poly& d = gb.elems[i].p;
                const auto& [dm, dc] = d.leading_term();
                if (!dm.divides(lm)) continue;
                Monomial shift = lm.divide_by(dm);
                RingElement factor = lc * dc.inverse();
                Poly t = Poly::from_monomial(spec, shift, factor);
                p = p - t * d;
                q[i] = q[i] + t;
                reduced = true;
                break;
            }
            if (!reduced) {
                Poly t = Poly::from_monomial(spec, lm, lc);
                r = r + t;
                p = p - t;
            }
        }
        if (q_out) *q_out = std::move(q);
        return r;
    }
};

}  // namespace

Poly normal_form(const Poly& p, const GroebnerBasis& gb, std::vector<Poly>* gen_cofactors) {
    std::vector<Poly> q;
    Poly r = Divider{gb}.divide(p, gen_cofactors ? &q : nullptr);
    if (gen_cofactors) {
        const RingSpec& spec = p.spec();
        int nv = p.nvars();
        gen_cofactors->assign(gb.gens.size(), Poly::zero(spec, nv));
        for (size_t i = 0; i < gb.elems.size(); ++i) {
            if (q[i].is_zero()) continue;
            for (size_t a = 0; a < gb.gens.size(); ++a)
                (*gen_cofactors)[a] = (*gen_cofactors)[a] + q[i] * gb.elems[i].cofactors[a];
        }
    }
    return r;
}

GroebnerBasis buchberger(std::vector<Poly> gens) {
    if (gens.empty()) fail("InvalidArgument", "no generators");
    const RingSpec spec = gens[0].spec();
    const int nv = gens[0].nvars();
    if (!spec.is_field()) fail("SpecMismatch", "Groebner bases require field coefficients");

    GroebnerBasis gb;
    gb.gens = gens;
    for (size_t a = 0; a < gens.size(); ++a) {
        if (gens[a].is_zero()) continue;
        GroebnerBasis::Element e;
        e.p = gens[a];
        e.cofactors.assign(gens.size(), Poly::zero(spec, nv));
        e.cofactors[a] = Poly::constant(spec, nv, spec.one());
        gb.elems.push_back(std::move(e));
    }
    if (gb.elems.empty()) fail("NotZeroDimensional", "all generators vanish; the ideal is (0)");

    std::deque<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < gb.elems.size(); ++i)
        for (size_t j = i + 1; j < gb.elems.size(); ++j) pairs.emplace_back(i, j);

    size_t processed = 0;
    while (!pairs.empty()) {
        auto [i, j] = pairs.front();
        pairs.pop_front();
        if (++processed > 200000) fail("IterationCapExceeded", "Buchberger pair cap exceeded");

        const Poly& fi = gb.elems[i].p;
        const Poly& fj = gb.elems[j].p;
        const Monomial& mi = fi.leading_term().first;
        const Monomial& mj = fj.leading_term().first;
        // Buchberger's first criterion: coprime leading terms.
        if (Monomial::lcm(mi, mj) == mi * mj) continue;

        Monomial l = Monomial::lcm(mi, mj);
        Poly ti = Poly::from_monomial(spec, l.divide_by(mi), fi.leading_term().second.inverse());
        Poly tj = Poly::from_monomial(spec, l.divide_by(mj), fj.leading_term().second.inverse());
        Poly s = ti * fi - tj * fj;
        if (s.is_zero()) continue;

        std::vector<Poly> q;
        Poly r = Divider{gb}.divide(s, &q);
        if (r.is_zero()) continue;

        GroebnerBasis::Element e;
        e.cofactors.assign(gb.gens.size(), Poly::zero(spec, nv));
        for (size_t a = 0; a < gb.gens.size(); ++a) {
            Poly acc = ti * gb.elems[i].cofactors[a] - tj * gb.elems[j].cofactors[a];
            for (size_t k = 0; k < gb.elems.size(); ++k)
                acc = acc - q[k] * gb.elems[k].cofactors[a];
            e.cofactors[a] = acc;
        }
        e.p = r;
        gb.elems.push_back(std::move(e));
        for (size_t k = 0; k + 1 < gb.elems.size(); ++k) pairs.emplace_back(k, gb.elems.size() - 1);
    }

    // Inter-reduce: drop elements whose leading term another one divides,
    // then fully reduce tails and normalize to monic.
    std::vector<GroebnerBasis::Element> kept;
    for (size_t i = 0; i < gb.elems.size(); ++i) {
        const Monomial& mi = gb.elems[i].p.leading_term().first;
        bool redundant = false;
        for (size_t j = 0; j < gb.elems.size() && !redundant; ++j) {
            if (i == j) continue;
            const Monomial& mj = gb.elems[j].p.leading_term().first;
            if (!mj.divides(mi)) continue;
            redundant = (mi == mj) ? j < i : true;  // equal LTs keep the first
        }
        if (!redundant) kept.push_back(gb.elems[i]);
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        return Monomial::degrevlex_less(a.p.leading_term().first, b.p.leading_term().first);
    });
    GroebnerBasis reduced;
    reduced.gens = gb.gens;
    for (auto& e : kept) {
        GroebnerBasis partial = reduced;
        Poly tail = e.p - Poly::from_monomial(spec, e.p.leading_term().first,
                                              e.p.leading_term().second);
        std::vector<Poly> q;
        Poly nf_tail = partial.elems.empty() ? tail : Divider{partial}.divide(tail, &q);
        GroebnerBasis::Element ne;
        ne.p = Poly::from_monomial(spec, e.p.leading_term().first, e.p.leading_term().second) +
               nf_tail;
        ne.cofactors = e.cofactors;
        if (!partial.elems.empty()) {
            for (size_t a = 0; a < reduced.gens.size(); ++a)
                for (size_t k = 0; k < partial.elems.size(); ++k)
                    ne.cofactors[a] = ne.cofactors[a] - q[k] * partial.elems[k].cofactors[a];
        }
        // Monic normalization.
        RingElement inv = ne.p.leading_term().second.inverse();
        ne.p = ne.p.scaled(inv);
        for (auto& c : ne.cofactors) c = c.scaled(inv);
        reduced.elems.push_back(std::move(ne));
    }
    return reduced;
}

// ---------------------------------------------------------------------------
// Milnor data

int MilnorData::basis_index(const Monomial& m) const {
    for (size_t i = 0; i < basis.size(); ++i)
        if (basis[i] == m) return static_cast<int>(i);
    return -1;
}

MilnorData milnor_basis(const Poly& f) {
    if (!f.spec().is_field())
        fail("SpecMismatch", "milnor_basis requires field coefficients (QQ or Q(lambda))");
    const int nv = f.nvars();
    std::vector<Poly> gens;
    gens.reserve(static_cast<size_t>(nv));
    bool any = false;
    for (int a = 0; a < nv; ++a) {
        gens.push_back(f.derivative(a));
        if (!gens.back().is_zero()) any = true;
    }
    if (!any)
        fail("NotZeroDimensional", "all partial derivatives vanish; critical set is everything");

    MilnorData md;
    md.f = f;
    md.gb = buchberger(gens);

    if (md.gb.contains_unit()) return md;  // ideal = (1): mu = 0, empty basis

    // Zero-dimensionality: every variable needs a pure-power leading term.
    std::vector<int> bound(static_cast<size_t>(nv), -1);
    for (const auto& e : md.gb.elems) {
        const Monomial& lt = e.p.leading_term().first;
        int var = -1, count = 0;
        for (int i = 0; i < nv; ++i)
            if (lt.exponent(i) > 0) {
                var = i;
                ++count;
            }
        if (count == 1) {
            int bexp = lt.exponent(var);
            if (bound[static_cast<size_t>(var)] < 0 || bexp < bound[static_cast<size_t>(var)])
                bound[static_cast<size_t>(var)] = bexp;
        }
    }
    for (int i = 0; i < nv; ++i)
        if (bound[static_cast<size_t>(i)] < 0)
            fail("NotZeroDimensional",
                 "no pure power of x" + std::to_string(i + 1) +
                     " among leading terms: non-isolated critical points");

    // Enumerate standard monomials under the pure-power box.
    std::vector<Monomial> std_monomials;
    std::vector<int> e(static_cast<size_t>(nv), 0);
    auto divisible_by_lt = [&](const Monomial& m) {
        for (const auto& el : md.gb.elems)
            if (el.p.leading_term().first.divides(m)) return true;
        return false;
    };
    std::function<void(int)> enumerate = [&](int var) {
        if (var == nv) {
            Monomial m(e);
            if (!divisible_by_lt(m)) std_monomials.push_back(m);
            return;
        }
        for (int k = 0; k < bound[static_cast<size_t>(var)]; ++k) {
            e[static_cast<size_t>(var)] = k;
            enumerate(var + 1);
        }
        e[static_cast<size_t>(var)] = 0;
    };
    enumerate(0);
    std::sort(std_monomials.begin(), std_monomials.end(), Monomial::display_less);
    md.basis = std::move(std_monomials);
    return md;
}

// ---------------------------------------------------------------------------
// Reduction of n-forms

ReductionResult reduce_nform_certified(const MilnorData& m, const Poly& g) {
    const RingSpec& spec = m.f.spec();
    const int nv = m.f.nvars();
    if (g.spec() != spec || g.nvars() != nv)
        fail("SpecMismatch", "g must live over the Milnor data's ring");

    const uint64_t full_mask = (uint64_t(1) << nv) - 1;
    ReductionResult res;
    res.coords.assign(m.basis.size(), spec.zero());
    res.witness = Form(spec, nv);

    Poly current = g;
    int cap = 64 * (1 + std::max(0, g.is_zero() ? 0 : g.total_degree()));
    while (!current.is_zero()) {
        if (++res.passes > cap)
            fail("IterationCapExceeded",
                 "reduction did not stabilize within " + std::to_string(cap) + " passes");
        std::vector<Poly> q;
        Poly r = normal_form(current, m.gb, &q);
        for (const auto& [mono, c] : r.terms()) {
            int idx = m.basis_index(mono);
            if (idx < 0)
                fail("InternalError", "normal form left a non-basis monomial " + mono.str(Poly::default_names(nv)));
            res.coords[static_cast<size_t>(idx)] += c;
        }
        Poly next(spec, nv);
        for (int a = 0; a < nv; ++a) {
            const Poly& qa = q[static_cast<size_t>(a)];
            if (qa.is_zero()) continue;
            // i_a(dx) = (-1)^a dx_{complement of a}
            Poly signed_q = (a % 2 == 0) ? qa : -qa;
            res.witness.add_component(full_mask & ~(uint64_t(1) << a), signed_q);
            next = next - qa.derivative(a);
        }
        current = next;
    }
    return res;
}

std::vector<RingElement> reduce_nform(const MilnorData& m, const Poly& g) {
    return reduce_nform_certified(m, g).coords;
}

Form exactness_witness(const MilnorData& m, const Poly& g,
                       const std::vector<RingElement>& coords) {
    ReductionResult res = reduce_nform_certified(m, g);
    if (res.coords != coords)
        fail("InvalidArgument", "coordinates do not match reduce_nform(M, g)");
    // Direct expansion: g dx - sum c_b b dx must equal d_f(witness).
    const RingSpec& spec = m.f.spec();
    const int nv = m.f.nvars();
    Poly lhs = g;
    for (size_t b = 0; b < m.basis.size(); ++b)
        lhs = lhs - Poly::from_monomial(spec, m.basis[b], res.coords[b]);
    Form lhs_form = wedge(Form::from_poly(lhs), Form::volume(spec, nv));
    TwistedComplex complex(m.f);
    if (twisted_d(complex, res.witness) != lhs_form)
        fail("InternalError", "exactness witness failed direct expansion");
    return res.witness;
}

// ---------------------------------------------------------------------------
// Quadratic twisted complex over a ring

std::pair<RingElement, Form> quadratic_reduce(const SquareMatrix& a, const Poly& g) {
    const RingSpec& spec = a.spec();
    const int nv = a.size();
    if (!a.is_symmetric()) fail("MatrixNotSymmetric", "A must equal its transpose");
    if (g.spec() != spec || g.nvars() != nv) fail("SpecMismatch", "g/A spec mismatch");
    SquareMatrix inv = a.inverse();

    const uint64_t full_mask = (uint64_t(1) << nv) - 1;
    RingElement scalar = spec.zero();
    Form witness(spec, nv);

    Poly current = g;
    while (!current.is_zero()) {
        Poly next(spec, nv);
        for (const auto& [mono, c] : current.terms()) {
            if (mono.is_one()) {
                scalar += c;
                continue;
            }
            int k = 0;
            while (mono.exponent(k) == 0) ++k;
            Monomial rest = mono.decremented(k);
            // x_k m' dx = d_f(sum_a A^-1_{ka} m' i_a(dx)) - sum_a A^-1_{ka} d_a(m') dx
            for (int idx = 0; idx < nv; ++idx) {
                const RingElement& w = inv.at(k, idx);
                if (w.is_zero()) continue;
                RingElement cw = c * w;
                Poly qa = Poly::from_monomial(spec, rest, (idx % 2 == 0) ? cw : -cw);
                witness.add_component(full_mask & ~(uint64_t(1) << idx), qa);
                if (rest.exponent(idx) > 0)
                    next.add_term(rest.decremented(idx),
                                  -(cw * spec.from_int(rest.exponent(idx))));
            }
        }
        current = next;
    }
    return {scalar, witness};
}

QuadraticRankReport quadratic_rank_check(const SquareMatrix& a, int degree_cap) {
    const RingSpec& spec = a.spec();
    const int nv = a.size();
    QuadraticRankReport rep;
    rep.degree_cap = degree_cap;
    rep.volume_class = spec.zero();

    // df for f = (1/2) x^t A x has the ring's own coefficients: (A x)_a dx_a.
    Form df(spec, nv);
    for (int i = 0; i < nv; ++i) {
        Poly row(spec, nv);
        for (int j = 0; j < nv; ++j) row = row + Poly::variable(spec, nv, j).scaled(a.at(i, j));
        df = df + wedge(Form::from_poly(row), Form::differential(spec, nv, i));
    }
    TwistedComplex complex(df);
    Form volume = Form::volume(spec, nv);

    std::vector<int> e(static_cast<size_t>(nv), 0);
    std::function<void(int, int)> visit = [&](int var, int remaining) {
        if (var == nv) {
            Monomial mono(e);
            Poly g = Poly::from_monomial(spec, mono, spec.one());
            auto [scalar, witness] = quadratic_reduce(a, g);
            Form residue = wedge(Form::from_poly(g - Poly::constant(spec, nv, scalar)), volume);
            if (twisted_d(complex, witness) != residue) {
                rep.failures.push_back("witness failed for " +
                                       mono.str(Poly::default_names(nv)));
            }
            if (mono.is_one()) rep.volume_class = scalar;
            ++rep.forms_checked;
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            e[static_cast<size_t>(var)] = k;
            visit(var + 1, remaining - k);
        }
        e[static_cast<size_t>(var)] = 0;
    };
    visit(0, degree_cap);

    rep.ok = rep.failures.empty() && rep.volume_class.is_one();
    return rep;
}

}  // namespace twd
