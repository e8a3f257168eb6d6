#include "twderham/constraints.hpp"

#include <random>

#include "twderham/milnor.hpp"

namespace twd {

namespace {

/// Rank of an m x n matrix over Q.
int rational_rank(std::vector<std::vector<mpq_class>> m) {
    size_t rows = m.size();
    if (rows == 0) return 0;
    size_t cols = m[0].size();
    int rank = 0;
    size_t row = 0;
    for (size_t col = 0; col < cols && row < rows; ++col) {
        size_t sel = row;
        while (sel < rows && m[sel][col] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(m[sel], m[row]);
        for (size_t i = row + 1; i < rows; ++i) {
            if (m[i][col] == 0) continue;
            mpq_class f = m[i][col] / m[row][col];
            for (size_t j = col; j < cols; ++j) m[i][j] -= f * m[row][j];
        }
        ++row;
        ++rank;
    }
    return rank;
}

}  // namespace

ConstraintProblem::ConstraintProblem(Poly ambient_f, std::vector<Poly> cs, uint64_t seed)
    : n(ambient_f.nvars()), m(static_cast<int>(cs.size())), f(std::move(ambient_f)),
      constraints(std::move(cs)), g_total(f.spec(), n + m) {
    if (m < 1) fail("InvalidArgument", "need at least one constraint");
    for (const auto& c : constraints)
        if (c.spec() != f.spec() || c.nvars() != n)
            fail("SpecMismatch", "constraints must match f in spec and variables");

    g_total = f.padded(n + m);
    for (int i = 0; i < m; ++i)
        g_total = g_total +
                  Poly::variable(f.spec(), n + m, n + i) * constraints[static_cast<size_t>(i)].padded(n + m);

    // Regularity proxy: zero-dimensional Jacobian ideal of g_total.
    if (f.spec() == RingSpec::rationals()) {
        try {
            milnor_basis(g_total);
        } catch (const Error& e) {
            if (e.name() == "NotZeroDimensional") {
                regularity_ok = false;
                regularity_note = "maps computed, isomorphism not guaranteed: " +
                                  std::string(e.what());
            } else {
                throw;
            }
        }
        // Randomized sampling: any rational point found on the variety
        // must have a full-rank constraint Jacobian.
        std::mt19937_64 rng(seed ^ 0x5bd1e995ull);
        std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
        for (int trial = 0; trial < 200 && regularity_ok; ++trial) {
            std::vector<RingElement> pt;
            for (int i = 0; i < n; ++i) {
                mpq_class q(num(rng), den(rng));
                q.canonicalize();
                pt.push_back(RingSpec::rationals().from_mpq(q));
            }
            bool on_variety = true;
            for (const auto& c : constraints)
                if (!c.eval(pt).is_zero()) {
                    on_variety = false;
                    break;
                }
            if (!on_variety) continue;
            std::vector<std::vector<mpq_class>> jac;
            for (const auto& c : constraints) {
                std::vector<mpq_class> row;
                for (int j = 0; j < n; ++j)
                    row.push_back(c.derivative(j).eval(pt).rational_value());
                jac.push_back(std::move(row));
            }
            if (rational_rank(jac) < m) {
                regularity_ok = false;
                regularity_note = "maps computed, isomorphism not guaranteed: singular point found";
            }
        }
    }
}

Form delta_map(const Poly& p, const Form& omega) {
    if (p.spec() != omega.spec() || p.nvars() != omega.nvars())
        fail("SpecMismatch", "P and omega must share spec and variables");
    const int n = p.nvars();
    Form lift = omega.padded(n + 1);
    Form dp = de_rham_d(Form::from_poly(p.padded(n + 1)));
    Form dt = Form::differential(p.spec(), n + 1, n);
    return wedge(wedge(lift, dp), dt);
}

IntermediateImages intermediate_maps(const Poly& p, const Form& omega, int pole_order) {
    if (pole_order < 0) fail("InvalidArgument", "pole order must be nonnegative");
    if (p.spec() != omega.spec() || p.nvars() != omega.nvars())
        fail("SpecMismatch", "P and omega must share spec and variables");
    const RingSpec& spec = p.spec();
    const int n = p.nvars();

    IntermediateImages out;
    out.laurent_numerator = wedge(omega, de_rham_d(Form::from_poly(p)));
    out.pole_order = 1;

    RingElement fact = spec.one();
    for (int k = 2; k <= pole_order; ++k) fact *= spec.from_int(k);
    if (!fact.is_unit())
        fail("FactorialNotInvertible",
             std::to_string(pole_order) + "! is not a unit in " + spec.str());
    RingElement c = fact.inverse();
    if (pole_order % 2) c = -c;

    Poly t_pow = Poly::variable(spec, n + 1, n).pow(pole_order).scaled(c);
    out.t_image = wedge(omega.padded(n + 1).scaled(t_pow),
                        Form::differential(spec, n + 1, n));
    return out;
}

Form codim_m_map(const ConstraintProblem& cp, const Form& omega) {
    if (omega.spec() != cp.f.spec() || omega.nvars() != cp.n)
        fail("SpecMismatch", "omega must be a form on Y");
    const int total = cp.n + cp.m;
    Form acc = omega.padded(total);
    for (int i = 0; i < cp.m; ++i) {
        Form dfi = de_rham_d(Form::from_poly(cp.constraints[static_cast<size_t>(i)].padded(total)));
        acc = wedge(wedge(acc, dfi), Form::differential(cp.f.spec(), total, cp.n + i));
    }
    if (auto in_deg = omega.degree(); in_deg && !acc.is_zero()) {
        if (!acc.is_homogeneous(*in_deg + 2 * cp.m))
            fail("InternalError", "codimension map degree shift violated");
    }
    return acc;
}

DeltaChainReport delta_chain_check(const Poly& p, const Form& omega) {
    const RingSpec& spec = p.spec();
    const int n = p.nvars();
    DeltaChainReport rep;

    // d_{tP} on K^{n+1}.
    Poly tp = Poly::variable(spec, n + 1, n) * p.padded(n + 1);
    TwistedComplex complex(tp);
    rep.lhs = twisted_d(complex, delta_map(p, omega));

    // Induced differential representative: divide each component of
    // d(omega) by P, keeping the remainder and exhibiting alpha.
    if (!spec.is_field())
        fail("SpecMismatch", "chain-map certification divides by P over a field");
    GroebnerBasis gb = buchberger({p});
    Form d_omega = de_rham_d(omega);
    Form reduced(spec, n), alpha(spec, n);
    for (const auto& [mask, comp] : d_omega.components()) {
        std::vector<Poly> q;
        Poly r = normal_form(comp, gb, &q);
        reduced.add_component(mask, r);
        alpha.add_component(mask, q[0]);
    }
    rep.rhs = delta_map(p, reduced);
    rep.correction = delta_map(p, alpha.scaled(p));
    rep.ok = rep.lhs == rep.rhs + rep.correction;
    return rep;
}

}  // namespace twd
