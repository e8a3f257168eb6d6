#include "twderham/perturb.hpp"

#include <map>
#include <random>
#include <sstream>

namespace twd {

// ---------------------------------------------------------------------------
// LambdaSeries

LambdaSeries::LambdaSeries(RingSpec base, int order) : base_(std::move(base)), order_(order) {
    if (order < 1) fail("InvalidArgument", "lambda order must be >= 1");
    c_.assign(static_cast<size_t>(order), base_.zero());
}

LambdaSeries LambdaSeries::constant(const RingSpec& base, int order, const RingElement& c) {
    LambdaSeries s(base, order);
    s.set_coeff(0, c);
    return s;
}

void LambdaSeries::set_coeff(int i, RingElement v) {
    if (v.spec() != base_) fail("SpecMismatch", "series coefficient spec mismatch");
    c_[static_cast<size_t>(i)] = std::move(v);
}

bool LambdaSeries::is_zero() const {
    for (const auto& x : c_)
        if (!x.is_zero()) return false;
    return true;
}

namespace {
void check_series_compat(const LambdaSeries& a, const LambdaSeries& b) {
    if (a.base() != b.base() || a.order() != b.order())
        fail("SpecMismatch", "lambda series operands disagree");
}
}  // namespace

LambdaSeries LambdaSeries::operator+(const LambdaSeries& o) const {
    check_series_compat(*this, o);
    LambdaSeries r(*this);
    for (int i = 0; i < order_; ++i) r.c_[static_cast<size_t>(i)] += o.c_[static_cast<size_t>(i)];
    return r;
}

LambdaSeries LambdaSeries::operator-(const LambdaSeries& o) const { return *this + (-o); }

LambdaSeries LambdaSeries::operator-() const {
    LambdaSeries r(*this);
    for (auto& x : r.c_) x = -x;
    return r;
}

LambdaSeries LambdaSeries::operator*(const LambdaSeries& o) const {
    check_series_compat(*this, o);
    LambdaSeries r(base_, order_);
    for (int i = 0; i < order_; ++i) {
        if (c_[static_cast<size_t>(i)].is_zero()) continue;
        for (int j = 0; i + j < order_; ++j)
            r.c_[static_cast<size_t>(i + j)] += c_[static_cast<size_t>(i)] * o.c_[static_cast<size_t>(j)];
    }
    return r;
}

LambdaSeries LambdaSeries::scaled(const RingElement& c) const {
    LambdaSeries r(*this);
    for (auto& x : r.c_) x *= c;
    return r;
}

LambdaSeries LambdaSeries::shifted(int k) const {
    LambdaSeries r(base_, order_);
    for (int i = 0; i + k < order_; ++i) r.c_[static_cast<size_t>(i + k)] = c_[static_cast<size_t>(i)];
    return r;
}

bool LambdaSeries::operator==(const LambdaSeries& o) const {
    return base_ == o.base_ && order_ == o.order_ && c_ == o.c_;
}

LambdaSeries LambdaSeries::map_coefficients(const RingHom& h) const {
    LambdaSeries r(h.to(), order_);
    for (int i = 0; i < order_; ++i) r.set_coeff(i, hom_apply(h, c_[static_cast<size_t>(i)]));
    return r;
}

std::string LambdaSeries::str() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < order_; ++i) {
        if (i) os << ", ";
        os << c_[static_cast<size_t>(i)].str();
    }
    os << "]";
    return os.str();
}

// ---------------------------------------------------------------------------
// GaussianProblem

GaussianProblem::GaussianProblem(SquareMatrix a, Poly v, int lambda_order)
    : A(std::move(a)), A_inv(A.spec(), A.size()), V(std::move(v)), order(lambda_order) {
    if (!A.is_symmetric()) fail("MatrixNotSymmetric", "A must equal its transpose");
    A_inv = A.inverse();
    if (!(A * A_inv == SquareMatrix::identity(A.spec(), A.size())))
        fail("MatrixNotInvertible", "A * A^-1 != I");
    if (V.spec() != A.spec() || V.nvars() != A.size())
        fail("SpecMismatch", "V must be a polynomial over the problem ring in x1..xn");
    if (order < 1) fail("InvalidArgument", "lambda order must be >= 1");
    constant_dropped = V.drop_constant_term();
}

// ---------------------------------------------------------------------------
// Rewriting engine

namespace {

class RewriteEngine {
  public:
    RewriteEngine(const GaussianProblem& p, const IntegrateOptions& opts, int max_gdeg)
        : p_(p), opts_(opts), rng_(opts.seed ^ 0x9e3779b97f4a7c15ull) {
        for (int a = 0; a < p_.n(); ++a) dV_.push_back(p_.V.derivative(a));
        // Step budget O(deg g * (deg V)^N), generously padded; the math
        // guarantees termination, the cap guards against engine bugs.
        if (opts.step_cap) {
            cap_ = opts.step_cap;
        } else {
            mpz_class cap(64);
            cap *= 1 + std::max(0, max_gdeg);
            int dv = std::max(1, p_.V.is_zero() ? 1 : p_.V.total_degree());
            mpz_class pw;
            mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(dv),
                          static_cast<unsigned long>(p_.order));
            cap *= pw;
            cap_ = cap.fits_ulong_p() ? cap.get_ui() : UINT64_MAX;
        }
    }

    uint64_t steps() const { return steps_; }

    /// I(m) modulo lambda^budget, as base-ring coefficients.
    const std::vector<RingElement>& eval(const Monomial& m, int budget) {
        auto key = std::make_pair(m.exponents(), budget);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;

        if (++steps_ > cap_)
            fail("NonTerminating", "rewrite step cap exceeded (" + std::to_string(cap_) + ")");

        std::vector<RingElement> acc(static_cast<size_t>(std::max(budget, 0)),
                                     p_.spec().zero());
        if (budget > 0) {
            if (m.total_degree() == 0) {
                acc[0] = p_.spec().one();
            } else {
                int k = pick_pivot(m);
                Monomial rest = m.decremented(k);
                for (int a = 0; a < p_.n(); ++a) {
                    const RingElement& w = p_.A_inv.at(k, a);
                    if (w.is_zero()) continue;
                    if (rest.exponent(a) > 0) {
                        RingElement c = w * p_.spec().from_int(rest.exponent(a));
                        const auto& sub = eval(rest.decremented(a), budget);
                        for (int j = 0; j < budget; ++j)
                            acc[static_cast<size_t>(j)] += c * sub[static_cast<size_t>(j)];
                    }
                    if (budget > 1) {
                        for (const auto& [u, cu] : dV_[static_cast<size_t>(a)].terms()) {
                            RingElement c = w * cu;
                            const auto& sub = eval(u * rest, budget - 1);
                            for (int j = 0; j + 1 < budget; ++j)
                                acc[static_cast<size_t>(j + 1)] += c * sub[static_cast<size_t>(j)];
                        }
                    }
                }
                for (auto& x : acc) x = -x;
            }
        }
        auto [ins, ok] = memo_.emplace(std::move(key), std::move(acc));
        (void)ok;
        return ins->second;
    }

  private:
    int pick_pivot(const Monomial& m) {
        std::vector<int> live;
        for (int i = 0; i < m.nvars(); ++i)
            if (m.exponent(i) > 0) live.push_back(i);
        if (opts_.pivot == PivotStrategy::Leftmost) return live.front();
        return live[std::uniform_int_distribution<size_t>(0, live.size() - 1)(rng_)];
    }

    const GaussianProblem& p_;
    IntegrateOptions opts_;
    std::vector<Poly> dV_;
    std::map<std::pair<std::vector<int>, int>, std::vector<RingElement>> memo_;
    std::mt19937_64 rng_;
    uint64_t steps_ = 0;
    uint64_t cap_ = 0;
};

RingSpec lambda_spec(const GaussianProblem& p) {
    return RingSpec::series(p.spec(), "lambda", p.order);
}

}  // namespace

LambdaSeries integrate(const GaussianProblem& problem, const Poly& g,
                       const IntegrateOptions& opts, IntegrateStats* stats) {
    if (problem.spec().has_torsion() && !opts.allow_torsion)
        fail("TorsionRing",
             "normalized integrals are defined over torsion-free rings only (got " +
                 problem.spec().str() + ")");
    const int n = problem.n();
    const int N = problem.order;
    const RingSpec series = lambda_spec(problem);

    bool g_over_base = g.spec() == problem.spec();
    if (!g_over_base && g.spec() != series)
        fail("SpecMismatch", "g must live over the problem ring or over K[lambda]/(lambda^N)");
    if (g.nvars() != n) fail("SpecMismatch", "g must use the problem variables x1..xn");

    int gdeg = g.is_zero() ? 0 : g.total_degree();
    RewriteEngine engine(problem, opts, gdeg);
    LambdaSeries result(problem.spec(), N);
    for (const auto& [m, c] : g.terms()) {
        if (g_over_base) {
            const auto& sub = engine.eval(m, N);
            for (int j = 0; j < N; ++j)
                result.set_coeff(j, result.coeff(j) + c * sub[static_cast<size_t>(j)]);
        } else {
            const auto& slices = c.series_coeffs();
            for (int s = 0; s < N; ++s) {
                if (slices[static_cast<size_t>(s)].is_zero()) continue;
                const auto& sub = engine.eval(m, N - s);
                for (int j = 0; j + s < N; ++j)
                    result.set_coeff(j + s, result.coeff(j + s) +
                                                slices[static_cast<size_t>(s)] *
                                                    sub[static_cast<size_t>(j)]);
            }
        }
    }
    if (stats) stats->steps = engine.steps();
    return result;
}

LambdaSeries check_vanishing(const GaussianProblem& problem, const Poly& h, int var,
                             const IntegrateOptions& opts) {
    if (h.spec() != problem.spec() || h.nvars() != problem.n())
        fail("SpecMismatch", "h must be a polynomial over the problem ring");
    const RingSpec series = lambda_spec(problem);
    RingHom embed(problem.spec(), series);
    auto lift = [&](const Poly& p) { return base_change(embed, p); };

    // d_a f = (A x)_a + lambda * d_a V.
    Poly ax(problem.spec(), problem.n());
    for (int j = 0; j < problem.n(); ++j)
        ax = ax + Poly::variable(problem.spec(), problem.n(), j).scaled(problem.A.at(var, j));

    RingElement lambda_unit = [&] {
        std::vector<RingElement> c(static_cast<size_t>(problem.order), problem.spec().zero());
        if (problem.order > 1) c[1] = problem.spec().one();
        return RingElement(series, std::move(c));
    }();

    Poly g = lift(h.derivative(var)) + lift(ax * h) +
             lift(problem.V.derivative(var) * h).scaled(lambda_unit);
    return integrate(problem, g, opts);
}

RingElement wick_oracle(const SquareMatrix& a, const Monomial& m) {
    if (!a.is_symmetric()) fail("MatrixNotSymmetric", "A must equal its transpose");
    const RingSpec& spec = a.spec();
    if (m.total_degree() % 2 != 0) return spec.zero();
    SquareMatrix prop = a.inverse();  // pairs contribute -(A^-1)_{ij}
    std::vector<int> idx;
    for (int i = 0; i < m.nvars(); ++i)
        for (int k = 0; k < m.exponent(i); ++k) idx.push_back(i);

    std::function<RingElement(std::vector<int>&)> match = [&](std::vector<int>& pts) {
        if (pts.empty()) return spec.one();
        RingElement acc = spec.zero();
        int first = pts[0];
        for (size_t j = 1; j < pts.size(); ++j) {
            std::vector<int> rest;
            rest.reserve(pts.size() - 2);
            for (size_t k = 1; k < pts.size(); ++k)
                if (k != j) rest.push_back(pts[k]);
            acc += (-prop.at(first, pts[j])) * match(rest);
        }
        return acc;
    };
    return match(idx);
}

IntegralityReport integrality_report(const SquareMatrix& a, const Poly& v, const Poly& g,
                                     int lambda_order) {
    const RingSpec zz = RingSpec::integers();
    if (a.spec() != zz || v.spec() != zz || g.spec() != zz)
        fail("SpecMismatch", "integrality report runs over ZZ inputs");
    RingElement d = a.det();
    if (!d.is_unit())
        fail("MatrixNotUnimodular",
             "det A = " + d.str() + "; A must be invertible over the integers");

    GaussianProblem pz(a, v, lambda_order);
    RingHom to_q(zz, RingSpec::rationals());
    GaussianProblem pq(a.map(to_q.to(), [&](const RingElement& c) { return hom_apply(to_q, c); }),
                       base_change(to_q, v), lambda_order);

    IntegralityReport rep{integrate(pz, g), integrate(pq, base_change(to_q, g)), true, true};
    for (int i = 0; i < lambda_order; ++i) {
        const mpq_class& q = rep.over_rationals.coeff(i).rational_value();
        if (q.get_den() != 1) rep.all_integer = false;
    }
    rep.paths_match = rep.over_integers.map_coefficients(to_q) == rep.over_rationals;
    return rep;
}

}  // namespace twd
