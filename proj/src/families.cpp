#include "twderham/families.hpp"

#include <random>
#include <sstream>

namespace twd {

Poly to_function_field(const Poly& p, int param_index, const std::string& var) {
    if (p.spec() != RingSpec::rationals())
        fail("SpecMismatch", "function-field conversion expects a polynomial over QQ");
    const RingSpec ff = RingSpec::rational_functions(var);
    const int nv = p.nvars();
    Poly out(ff, nv - 1);
    for (const auto& [m, c] : p.terms()) {
        std::vector<int> e;
        e.reserve(static_cast<size_t>(nv - 1));
        for (int i = 0; i < nv; ++i)
            if (i != param_index) e.push_back(m.exponent(i));
        int k = m.exponent(param_index);
        std::vector<mpq_class> mono(static_cast<size_t>(k + 1), mpq_class(0));
        mono[static_cast<size_t>(k)] = c.rational_value();
        RingElement coeff(ff, RingElement::RatFunPayload{UniPolyQ(std::move(mono)),
                                                         UniPolyQ::constant(1)});
        out.add_term(Monomial(std::move(e)), coeff);
    }
    return out;
}

namespace {

Poly drop_var(const Poly& p, int var) {
    Poly out(p.spec(), p.nvars() - 1);
    for (const auto& [m, c] : p.terms()) {
        if (m.exponent(var) != 0)
            fail("InternalError", "drop_var on a polynomial still using the variable");
        std::vector<int> e;
        for (int i = 0; i < p.nvars(); ++i)
            if (i != var) e.push_back(m.exponent(i));
        out.add_term(Monomial(std::move(e)), c);
    }
    return out;
}

}  // namespace

FamilyProblem::FamilyProblem(const Poly& f_with_param, uint64_t seed, int sample_count) {
    if (f_with_param.spec() != RingSpec::rationals())
        fail("SpecMismatch", "family exponents are polynomials over QQ");
    if (f_with_param.nvars() < 2)
        fail("InvalidArgument", "need at least one fiber variable and the parameter");
    n = f_with_param.nvars() - 1;
    f_q = f_with_param;
    f_ff = to_function_field(f_q, n);
    df_dlambda_ff = f_ff.map_coefficients(f_ff.spec(),
                                          [](const RingElement& c) { return c.derivative(); });

    try {
        generic = milnor_basis(f_ff);
    } catch (const Error& e) {
        if (e.name() == "NotZeroDimensional")
            fail("GenericityFailure", std::string("generic fiber: ") + e.what());
        throw;
    }
    generic_mu = generic.mu();
    if (generic_mu == 0)
        fail("GenericityFailure", "generic fiber has trivial cohomology (mu = 0)");

    std::mt19937_64 rng(seed ^ 0xa02a48ebull);
    std::uniform_int_distribution<int> num(1, 400), den(1, 7);
    std::uniform_int_distribution<int> sign(0, 1);
    for (int s = 0; s < sample_count; ++s) {
        mpq_class q(sign(rng) ? num(rng) : -num(rng), den(rng));
        q.canonicalize();
        Poly fiber = drop_var(f_q.eval_var(n, RingSpec::rationals().from_mpq(q)), n);
        try {
            MilnorData md = milnor_basis(fiber);
            if (md.mu() != generic_mu)
                fail("GenericityFailure", "Milnor number jumps at lambda = " + q.get_str() +
                                              " (" + std::to_string(md.mu()) + " vs generic " +
                                              std::to_string(generic_mu) + ")");
        } catch (const Error& e) {
            if (e.name() == "NotZeroDimensional")
                fail("GenericityFailure",
                     "non-isolated critical points at lambda = " + q.get_str());
            throw;
        }
    }
}

std::vector<RingElement> gm_connection_apply(const FamilyProblem& fam,
                                             const std::vector<RingElement>& coords) {
    if (static_cast<int>(coords.size()) != fam.generic_mu)
        fail("SpecMismatch", "coordinate vector length must equal the generic mu");
    const RingSpec& ff = fam.f_ff.spec();
    Poly g(ff, fam.n);
    for (size_t b = 0; b < coords.size(); ++b)
        g = g + Poly::from_monomial(ff, fam.generic.basis[b], coords[b]);
    Poly dg = g.map_coefficients(ff, [](const RingElement& c) { return c.derivative(); });
    return reduce_nform(fam.generic, dg + fam.df_dlambda_ff * g);
}

LiftIndependenceReport lift_independence_check(const FamilyProblem& fam,
                                               const std::vector<Poly>& eta, const Form& omega) {
    const RingSpec qq = RingSpec::rationals();
    const int nv = fam.n + 1;  // fiber variables plus the parameter
    if (static_cast<int>(eta.size()) != fam.n)
        fail("SpecMismatch", "eta needs one component per fiber variable");
    for (const auto& c : eta)
        if (c.spec() != qq || c.nvars() != nv)
            fail("SpecMismatch", "eta components are polynomials over QQ in x and the parameter");
    if (omega.spec() != qq || omega.nvars() != nv)
        fail("SpecMismatch", "omega lives over QQ in x and the parameter");
    for (const auto& [mask, p] : omega.components())
        if (mask >> fam.n)
            fail("SpecMismatch", "omega must carry fiber differentials only");

    std::vector<Poly> eta_full(eta);
    eta_full.push_back(Poly::zero(qq, nv));  // vertical: no parameter component

    // eta(f) = sum_a eta_a d_a f over the fiber directions.
    Poly eta_f(qq, nv);
    for (int a = 0; a < fam.n; ++a)
        eta_f = eta_f + eta[static_cast<size_t>(a)] * fam.f_q.derivative(a);

    TwistedComplex complex(fam.f_q, fam.n);  // fiberwise d_f
    LiftIndependenceReport rep;
    rep.primitive = omega.contract(eta_full);
    rep.lhs = omega.lie_derivative(eta_full, fam.n) + omega.scaled(eta_f);
    rep.rhs = twisted_d(complex, rep.primitive) + twisted_d(complex, omega).contract(eta_full);
    rep.ok = rep.lhs == rep.rhs;
    return rep;
}

namespace {

/// Nonzero x with sum_j x_j col_j = 0, or empty when the columns are
/// independent. Gauss-Jordan over the coefficient field.
std::vector<RingElement> kernel_vector(const RingSpec& field,
                                       const std::vector<std::vector<RingElement>>& cols) {
    size_t k = cols.size();
    size_t rows = cols.empty() ? 0 : cols[0].size();
    std::vector<std::vector<RingElement>> m(rows, std::vector<RingElement>(k, field.zero()));
    for (size_t j = 0; j < k; ++j)
        for (size_t i = 0; i < rows; ++i) m[i][j] = cols[j][i];

    std::vector<int> pivot_of_col(k, -1);
    size_t row = 0;
    for (size_t col = 0; col < k && row < rows; ++col) {
        size_t sel = row;
        while (sel < rows && m[sel][col].is_zero()) ++sel;
        if (sel == rows) continue;  // free column
        std::swap(m[sel], m[row]);
        RingElement inv = m[row][col].inverse();
        for (size_t j = col; j < k; ++j) m[row][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == row || m[i][col].is_zero()) continue;
            RingElement f = m[i][col];
            for (size_t j = col; j < k; ++j) m[i][j] -= f * m[row][j];
        }
        pivot_of_col[col] = static_cast<int>(row);
        ++row;
    }
    int free_col = -1;
    for (size_t col = 0; col < k; ++col)
        if (pivot_of_col[col] < 0) {
            free_col = static_cast<int>(col);
            break;
        }
    if (free_col < 0) return {};
    std::vector<RingElement> x(k, field.zero());
    x[static_cast<size_t>(free_col)] = field.one();
    for (size_t col = 0; col < static_cast<size_t>(free_col); ++col)
        if (pivot_of_col[col] >= 0)
            x[col] = -m[static_cast<size_t>(pivot_of_col[col])][static_cast<size_t>(free_col)];
    return x;
}

}  // namespace

std::string PicardFuchsOperator::str(const std::string& var) const {
    std::ostringstream os;
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (i) os << " + ";
        os << "(" << coeffs[i].str(var) << ")";
        if (i == 1) os << "*D";
        if (i > 1) os << "*D^" << i;
    }
    return os.str();
}

PicardFuchsOperator picard_fuchs(const FamilyProblem& fam, const Poly& seed) {
    const RingSpec& ff = fam.f_ff.spec();
    Poly g0(ff, fam.n);
    if (seed.spec() == RingSpec::rationals() && seed.nvars() == fam.n + 1)
        g0 = to_function_field(seed, fam.n);
    else if (seed.spec() == RingSpec::rationals() && seed.nvars() == fam.n)
        g0 = seed.map_coefficients(ff, [&](const RingElement& c) {
            return ff.from_mpq(c.rational_value());
        });
    else if (seed.spec() == ff && seed.nvars() == fam.n)
        g0 = seed;
    else
        fail("SpecMismatch", "seed must be a polynomial in the fiber variables");

    std::vector<std::vector<RingElement>> chain;
    chain.push_back(reduce_nform(fam.generic, g0));
    for (int r = 0; r <= fam.generic_mu; ++r) {
        std::vector<RingElement> x = kernel_vector(ff, chain);
        if (!x.empty()) {
            // Verify the dependence against the chain before normalizing.
            for (int i = 0; i < fam.generic_mu; ++i) {
                RingElement acc = ff.zero();
                for (size_t j = 0; j < chain.size(); ++j)
                    acc += x[j] * chain[j][static_cast<size_t>(i)];
                if (!acc.is_zero())
                    fail("InternalError", "Picard-Fuchs dependence failed verification");
            }
            // Clear denominators: multiply by the lcm of all fraction
            // denominators, then normalize integer content and sign.
            UniPolyQ den_lcm = UniPolyQ::constant(1);
            for (const auto& c : x) {
                const auto& f = c.rat_fun();
                UniPolyQ g = UniPolyQ::gcd(den_lcm, f.den);
                UniPolyQ q, rem;
                UniPolyQ::divmod(f.den, g, q, rem);
                den_lcm = den_lcm * q;
            }
            std::vector<UniPolyQ> cleared;
            for (const auto& c : x) {
                const auto& f = c.rat_fun();
                UniPolyQ q, rem;
                UniPolyQ::divmod(den_lcm, f.den, q, rem);
                cleared.push_back(f.num * q);
            }
            mpq_class scale(1);
            {
                // Joint content across all coefficient polynomials.
                UniPolyQ flat;
                std::vector<mpq_class> all;
                for (const auto& p : cleared)
                    for (const auto& c : p.coeffs()) all.push_back(c);
                scale = UniPolyQ(all).content_inverse();
            }
            // Sign: leading coefficient of the top operator coefficient positive.
            const UniPolyQ& top = cleared.back();
            if (!top.is_zero() && top.coeff(top.degree()) * scale < 0) scale = -scale;
            PicardFuchsOperator op;
            for (auto& p : cleared) op.coeffs.push_back(p.scaled(scale));
            return op;
        }
        chain.push_back(gm_connection_apply(fam, chain.back()));
    }
    fail("NoDependence", "no linear dependence up to order mu = " +
                             std::to_string(fam.generic_mu) + "; genericity suspect");
}

}  // namespace twd
