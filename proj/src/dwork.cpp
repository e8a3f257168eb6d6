#include "twderham/dwork.hpp"

#include <sstream>

#include "twderham/milnor.hpp"

namespace twd {

// ---------------------------------------------------------------------------
// TruncSeries

TruncSeries::TruncSeries(RingSpec ring, int cutoff) : ring_(std::move(ring)), cutoff_(cutoff) {
    if (ring_.kind() != RingSpec::Kind::PiAdic)
        fail("SpecMismatch", "TruncSeries coefficients live in a PiAdic ring");
    if (cutoff < 0) fail("InvalidArgument", "cutoff must be nonnegative");
    a_.assign(static_cast<size_t>(cutoff) + 1, ring_.zero());
}

TruncSeries TruncSeries::one(const RingSpec& ring, int cutoff) {
    TruncSeries s(ring, cutoff);
    s.set_coeff(0, ring.one());
    return s;
}

void TruncSeries::set_coeff(int i, RingElement v) {
    if (v.spec() != ring_) fail("SpecMismatch", "series coefficient spec mismatch");
    a_[static_cast<size_t>(i)] = std::move(v);
}

bool TruncSeries::is_zero() const {
    for (const auto& x : a_)
        if (!x.is_zero()) return false;
    return true;
}

namespace {
void check_trunc_compat(const TruncSeries& a, const TruncSeries& b) {
    if (a.ring() != b.ring() || a.cutoff() != b.cutoff())
        fail("SpecMismatch", "truncated series operands disagree");
}
}  // namespace

TruncSeries TruncSeries::operator+(const TruncSeries& o) const {
    check_trunc_compat(*this, o);
    TruncSeries r(*this);
    for (int i = 0; i <= cutoff_; ++i) r.a_[static_cast<size_t>(i)] += o.a_[static_cast<size_t>(i)];
    return r;
}

TruncSeries TruncSeries::operator-(const TruncSeries& o) const { return *this + (-o); }

TruncSeries TruncSeries::operator-() const {
    TruncSeries r(*this);
    for (auto& x : r.a_) x = -x;
    return r;
}

TruncSeries TruncSeries::operator*(const TruncSeries& o) const {
    check_trunc_compat(*this, o);
    TruncSeries r(ring_, cutoff_);
    for (int i = 0; i <= cutoff_; ++i) {
        if (a_[static_cast<size_t>(i)].is_zero()) continue;
        for (int j = 0; i + j <= cutoff_; ++j) {
            if (o.a_[static_cast<size_t>(j)].is_zero()) continue;
            r.a_[static_cast<size_t>(i + j)] += a_[static_cast<size_t>(i)] * o.a_[static_cast<size_t>(j)];
        }
    }
    return r;
}

TruncSeries TruncSeries::scaled(const RingElement& c) const {
    TruncSeries r(*this);
    for (auto& x : r.a_) x *= c;
    return r;
}

bool TruncSeries::operator==(const TruncSeries& o) const {
    return ring_ == o.ring_ && cutoff_ == o.cutoff_ && a_ == o.a_;
}

TruncSeries TruncSeries::substitute_power(int k) const {
    if (k < 1) fail("InvalidArgument", "substitution power must be positive");
    TruncSeries r(ring_, cutoff_);
    for (int i = 0; i <= cutoff_ / k; ++i) r.a_[static_cast<size_t>(i * k)] = a_[static_cast<size_t>(i)];
    return r;
}

TruncSeries TruncSeries::derivative() const {
    TruncSeries r(ring_, cutoff_);
    for (int i = 1; i <= cutoff_; ++i)
        r.a_[static_cast<size_t>(i - 1)] = a_[static_cast<size_t>(i)] * ring_.from_int(i);
    return r;
}

TruncSeries TruncSeries::truncated(int new_cutoff) const {
    TruncSeries r(ring_, new_cutoff);
    for (int i = 0; i <= std::min(new_cutoff, cutoff_); ++i) r.a_[static_cast<size_t>(i)] = a_[static_cast<size_t>(i)];
    return r;
}

std::string TruncSeries::str() const {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i <= cutoff_; ++i) {
        if (a_[static_cast<size_t>(i)].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << a_[static_cast<size_t>(i)].str() << ")";
        if (i == 1) os << "*x";
        if (i > 1) os << "*x^" << i;
    }
    return first ? "0" : os.str();
}

// ---------------------------------------------------------------------------
// Ramified-Q staging layer: elements of Q[pi]/(pi^{p-1} + p) with exact
// rational coefficients; exp() denominators cancel here before anything is
// reduced mod p^N.

namespace {

using QPi = std::vector<mpq_class>;  // length p-1

QPi qpi_zero(int p) { return QPi(static_cast<size_t>(p - 1), mpq_class(0)); }

bool qpi_is_zero(const QPi& a) {
    for (const auto& x : a)
        if (x != 0) return false;
    return true;
}

void qpi_add_scaled(QPi& acc, const QPi& b, const mpq_class& s) {
    for (size_t i = 0; i < acc.size(); ++i) acc[i] += b[i] * s;
}

QPi qpi_mul(const QPi& a, const QPi& b, int p) {
    size_t n = a.size();
    std::vector<mpq_class> conv(2 * n - 1, mpq_class(0));
    for (size_t i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < n; ++j) {
            if (b[j] == 0) continue;
            conv[i + j] += a[i] * b[j];
        }
    }
    QPi r = qpi_zero(p);
    for (size_t k = conv.size(); k-- > 0;) {
        if (k >= n)
            conv[k - n] -= p * conv[k];
        else
            r[k] = conv[k];
    }
    return r;
}

/// pi^e reduced into Q[pi]/(pi^{p-1} + p).
QPi qpi_pi_power(int p, long e) {
    QPi r = qpi_zero(p);
    long q = e / (p - 1), rem = e % (p - 1);
    mpq_class c(1);
    mpz_class mp;
    mpz_ui_pow_ui(mp.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(q));
    c = mpq_class(mp);
    if (q % 2) c = -c;
    r[static_cast<size_t>(rem)] = c;
    return r;
}

struct StagedSeries {
    int p;
    std::vector<QPi> a;  // degree -> ramified rational coefficient
};

StagedSeries staged_zero(int p, int cutoff) {
    return StagedSeries{p, std::vector<QPi>(static_cast<size_t>(cutoff) + 1, qpi_zero(p))};
}

StagedSeries staged_mul(const StagedSeries& x, const StagedSeries& y) {
    StagedSeries r = staged_zero(x.p, static_cast<int>(x.a.size()) - 1);
    for (size_t i = 0; i < x.a.size(); ++i) {
        if (qpi_is_zero(x.a[i])) continue;
        for (size_t j = 0; i + j < x.a.size(); ++j) {
            if (qpi_is_zero(y.a[j])) continue;
            QPi prod = qpi_mul(x.a[i], y.a[j], x.p);
            for (size_t k = 0; k < prod.size(); ++k) r.a[i + j][k] += prod[k];
        }
    }
    return r;
}

/// exp(U) for a staged polynomial U with U(0) = 0: sum U^j / j! with exact
/// rational bookkeeping.
StagedSeries staged_exp(const StagedSeries& u, int cutoff) {
    StagedSeries result = staged_zero(u.p, cutoff);
    result.a[0][0] = 1;
    StagedSeries term = result;  // U^j / j!
    for (int j = 1; j <= cutoff; ++j) {
        term = staged_mul(term, u);
        bool all_zero = true;
        for (auto& coeff : term.a)
            for (auto& q : coeff) {
                q /= j;
                if (q != 0) all_zero = false;
            }
        if (all_zero) break;
        for (size_t d = 0; d <= static_cast<size_t>(cutoff); ++d)
            for (size_t k = 0; k < term.a[d].size(); ++k) result.a[d][k] += term.a[d][k];
    }
    return result;
}

/// Reduce an exact staged series into the PiAdic ring; every coefficient
/// must be p-integral (denominator prime to p) or the staging failed.
TruncSeries staged_to_ring(const StagedSeries& s, const RingSpec& ring) {
    const int p = ring.prime();
    const mpz_class& pn = ring.pi_adic_modulus();
    TruncSeries out(ring, static_cast<int>(s.a.size()) - 1);
    for (size_t d = 0; d < s.a.size(); ++d) {
        RingElement::PiAdicPayload pay;
        pay.c.assign(static_cast<size_t>(p - 1), mpz_class(0));
        for (size_t k = 0; k < s.a[d].size(); ++k) {
            const mpq_class& q = s.a[d][k];
            if (q == 0) continue;
            if (mpz_divisible_ui_p(q.get_den().get_mpz_t(), static_cast<unsigned long>(p)))
                fail("InternalError", "staging produced a non-p-integral coefficient");
            mpz_class den_inv;
            mpz_invert(den_inv.get_mpz_t(), q.get_den().get_mpz_t(), pn.get_mpz_t());
            pay.c[k] = q.get_num() * den_inv;
        }
        out.set_coeff(static_cast<int>(d), RingElement(ring, std::move(pay)));
    }
    return out;
}

/// Staged pi * (f(x^p) - f(x)) for p-integral one-variable f.
StagedSeries staged_frobenius_exponent(const RingSpec& ring, const Poly& f, int cutoff) {
    const int p = ring.prime();
    StagedSeries u = staged_zero(p, cutoff);
    for (const auto& [m, c] : f.terms()) {
        int e = m.exponent(0);
        if (e == 0) continue;  // constant cancels in f(x^p) - f(x)
        mpq_class q = c.rational_value();
        if (mpz_divisible_ui_p(q.get_den().get_mpz_t(), static_cast<unsigned long>(p)))
            fail("DenominatorNotInvertible",
                 "f must have p-integral coefficients (found " + q.get_str() + ")");
        long pe = static_cast<long>(p) * e;
        if (pe <= cutoff) qpi_add_scaled(u.a[static_cast<size_t>(pe)], qpi_pi_power(p, 1), q);
        if (e <= cutoff) qpi_add_scaled(u.a[static_cast<size_t>(e)], qpi_pi_power(p, 1), -q);
    }
    return u;
}

void check_theta_precision(const RingSpec& ring, int cutoff, int degree_scale) {
    // The overconvergent tail gains (p-1)/p^2 valuation per z-degree; if
    // the whole computed range sits beyond precision N the request is
    // meaningless.
    long lhs = static_cast<long>(cutoff) * (ring.prime() - 1);
    long rhs = static_cast<long>(ring.precision()) * ring.prime() * ring.prime() * degree_scale;
    if (lhs >= rhs)
        fail("PrecisionExhausted",
             "cutoff " + std::to_string(cutoff) + " exceeds the precision horizon of " +
                 ring.str());
}

}  // namespace

TruncSeries dwork_theta(const RingSpec& ring, int cutoff) {
    if (ring.kind() != RingSpec::Kind::PiAdic) fail("SpecMismatch", "theta needs a PiAdic ring");
    check_theta_precision(ring, cutoff, 1);
    const int p = ring.prime();
    StagedSeries u = staged_zero(p, cutoff);
    if (cutoff >= 1) u.a[1] = qpi_pi_power(p, 1);
    if (cutoff >= p) qpi_add_scaled(u.a[static_cast<size_t>(p)], qpi_pi_power(p, 1), mpq_class(-1));
    return staged_to_ring(staged_exp(u, cutoff), ring);
}

TruncSeries frobenius_correcting_factor(const RingSpec& ring, const Poly& f, int cutoff) {
    if (ring.kind() != RingSpec::Kind::PiAdic) fail("SpecMismatch", "PiAdic ring required");
    if (f.nvars() != 1 || f.spec() != RingSpec::rationals())
        fail("SpecMismatch", "f must be a one-variable polynomial over QQ");
    int df = std::max(1, f.is_zero() ? 1 : f.total_degree());
    check_theta_precision(ring, cutoff, df);
    return staged_to_ring(staged_exp(staged_frobenius_exponent(ring, f, cutoff), cutoff), ring);
}

TruncSeries frobenius_apply_function(const RingSpec& ring, const Poly& f, const TruncSeries& g,
                                     int cutoff) {
    TruncSeries factor = frobenius_correcting_factor(ring, f, cutoff);
    return factor * g.truncated(cutoff).substitute_power(ring.prime());
}

TruncSeries frobenius_apply(const RingSpec& ring, const Poly& f, const TruncSeries& w, int cutoff) {
    TruncSeries base = frobenius_apply_function(ring, f, w, cutoff);
    // Multiply by d(x^p)/dx = p x^{p-1}.
    TruncSeries shift(ring, cutoff);
    if (ring.prime() - 1 <= cutoff) shift.set_coeff(ring.prime() - 1, ring.from_int(ring.prime()));
    return base * shift;
}

TruncSeries twisted_d_coefficient(const RingSpec& ring, const Poly& f, const TruncSeries& g) {
    const int cutoff = g.cutoff();
    TruncSeries fprime(ring, cutoff);
    Poly df = f.derivative(0);
    for (const auto& [m, c] : df.terms()) {
        int e = m.exponent(0);
        if (e > cutoff) continue;
        fprime.set_coeff(e, ring.from_mpq(c.rational_value()));
    }
    RingElement pi = [&] {
        RingElement::PiAdicPayload pay;
        pay.c.assign(static_cast<size_t>(ring.prime() - 1), mpz_class(0));
        if (pay.c.size() > 1) pay.c[1] = 1;
        return RingElement(ring, std::move(pay));
    }();
    return g.derivative() + (fprime * g).scaled(pi);
}

// ---------------------------------------------------------------------------
// Eigenvalue extraction with pessimistic precision tracking

namespace {

/// Value u * pi^{-shift} with u exact mod p^N; divisions by pi only grow
/// the shift, so the representation never loses digits until the final
/// materialization.
struct PiLaurent {
    RingElement u;
    int shift = 0;
};

PiLaurent laurent_align(const PiLaurent& a, int target_shift, const RingElement& pi) {
    PiLaurent r = a;
    while (r.shift < target_shift) {
        r.u *= pi;
        ++r.shift;
    }
    return r;
}

}  // namespace

bool pi_adic_congruent(const RingElement& a, const RingElement& b, const mpq_class& horizon) {
    if (a.spec() != b.spec()) return false;
    const int p = a.spec().prime();
    const int n = a.spec().precision();
    const auto& ca = a.pi_adic().c;
    const auto& cb = b.pi_adic().c;
    for (size_t k = 0; k < ca.size(); ++k) {
        // digits of coordinate k trusted up to ceil(horizon - k/(p-1))
        mpq_class need = horizon - mpq_class(static_cast<long>(k), p - 1);
        need.canonicalize();
        mpz_class digits = need.get_num() / need.get_den();
        if (mpq_class(digits) < need) digits += 1;  // ceil
        long d = std::min<long>(digits.get_si(), n);
        if (d <= 0) continue;
        mpz_class mod;
        mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(d));
        mpz_class diff = ca[k] - cb[k];
        if (!mpz_divisible_p(diff.get_mpz_t(), mod.get_mpz_t())) return false;
    }
    return true;
}

RingElement pi_adic_truncate(const RingElement& a, const mpq_class& horizon) {
    const int p = a.spec().prime();
    const int n = a.spec().precision();
    RingElement::PiAdicPayload pay;
    const auto& ca = a.pi_adic().c;
    pay.c.assign(ca.size(), mpz_class(0));
    for (size_t k = 0; k < ca.size(); ++k) {
        mpq_class need = horizon - mpq_class(static_cast<long>(k), p - 1);
        need.canonicalize();
        mpz_class digits = need.get_num() / need.get_den();
        if (mpq_class(digits) < need) digits += 1;
        long d = std::min<long>(std::max<long>(digits.get_si(), 0), n);
        if (d == 0) continue;
        mpz_class mod;
        mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(d));
        mpz_mod(pay.c[k].get_mpz_t(), ca[k].get_mpz_t(), mod.get_mpz_t());
    }
    return RingElement(a.spec(), std::move(pay));
}

FrobeniusEigenvalue frobenius_eigenvalue(const RingSpec& ring, const Poly& f, int cutoff) {
    if (ring.kind() != RingSpec::Kind::PiAdic) fail("SpecMismatch", "PiAdic ring required");
    if (f.nvars() != 1 || f.spec() != RingSpec::rationals())
        fail("SpecMismatch", "f must be a one-variable polynomial over QQ");

    // Top cohomology must be one-dimensional over Q.
    {
        MilnorData md = milnor_basis(f);
        if (md.mu() != 1)
            fail("MilnorMismatch", "mu(f) = " + std::to_string(md.mu()) +
                                       "; the eigenvalue needs a one-dimensional H^1");
    }
    // mu = 1 in one variable forces f = (alpha/2) x^2 + beta x + c.
    mpq_class alpha_q = f.coefficient(Monomial::var(1, 0, 2)).rational_value() * 2;
    mpq_class beta_q = f.coefficient(Monomial::var(1, 0, 1)).rational_value();
    const int p = ring.prime();
    const int n_prec = ring.precision();
    if (mpz_divisible_ui_p(alpha_q.get_num().get_mpz_t(), static_cast<unsigned long>(p)) ||
        mpz_divisible_ui_p(alpha_q.get_den().get_mpz_t(), static_cast<unsigned long>(p)))
        fail("ReductionDiverged", "leading coefficient of f' must be a p-adic unit");

    TruncSeries w = frobenius_apply(ring, f, TruncSeries::one(ring, cutoff), cutoff);

    RingElement pi = [&] {
        RingElement::PiAdicPayload pay;
        pay.c.assign(static_cast<size_t>(p - 1), mpz_class(0));
        if (pay.c.size() > 1) pay.c[1] = 1;
        return RingElement(ring, std::move(pay));
    }();
    RingElement alpha_inv = ring.from_mpq(alpha_q).inverse();
    RingElement beta_over_alpha = ring.from_mpq(beta_q) * alpha_inv;

    // Back-substitution with d_{pi f}(x^k) = k x^{k-1} + pi alpha x^{k+1} + pi beta x^k.
    std::vector<PiLaurent> coeffs;
    coeffs.reserve(static_cast<size_t>(cutoff) + 1);
    for (int i = 0; i <= cutoff; ++i) coeffs.push_back(PiLaurent{w.coeff(i), 0});
    for (int k = cutoff - 1; k >= 0; --k) {
        PiLaurent& top = coeffs[static_cast<size_t>(k + 1)];
        if (top.u.is_zero()) continue;
        // factor = w_{k+1} / (pi alpha): subtracting factor * d_{pi f}(x^k)
        // clears degree k+1 and feeds degrees k and k-1.
        PiLaurent factor{top.u * alpha_inv, top.shift + 1};
        if (k >= 1) {
            PiLaurent feed{factor.u * ring.from_int(k), factor.shift};
            PiLaurent& dst = coeffs[static_cast<size_t>(k - 1)];
            int s = std::max(dst.shift, feed.shift);
            PiLaurent da = laurent_align(dst, s, pi), fa = laurent_align(feed, s, pi);
            dst = PiLaurent{da.u - fa.u, s};
        }
        {
            // pi beta * factor has the pi cancel: (beta/alpha) w_{k+1}.
            PiLaurent feed{top.u * beta_over_alpha, top.shift};
            PiLaurent& dst = coeffs[static_cast<size_t>(k)];
            int s = std::max(dst.shift, feed.shift);
            PiLaurent da = laurent_align(dst, s, pi), fa = laurent_align(feed, s, pi);
            dst = PiLaurent{da.u - fa.u, s};
        }
        top = PiLaurent{ring.zero(), 0};
    }

    // Truncation-tail bound: the dropped class [x^{2m} dx], m > D/2, would
    // contribute p E_{2m-(p-1)} (2m-1)!!/(pi alpha)^m; with the theta-type
    // slope (p-1)/p^2 per z-degree and ord_p((2m-1)!!) =
    // (m - s_p(2m) + s_p(m))/(p-1), the pi-divisions cancel against the
    // double factorial and the contribution valuation is bounded by
    //   1 + slope (2m - p + 1)/2 + (s_p(m) - s_p(2m))/(p-1).
    // The bound needs beta = 0 (pure parity chains); with a linear term the
    // tail is not controlled here and the horizon collapses pessimistically.
    auto digit_sum = [&](long v) {
        long s = 0;
        while (v > 0) {
            s += v % p;
            v /= p;
        }
        return s;
    };
    mpq_class tail_horizon;
    {
        mpq_class slope(p - 1, p * p);  // per z = x^2 degree
        bool beta_zero = beta_q == 0;
        long m_first = cutoff / 2 + 1;
        mpq_class best(-1);
        for (long m = m_first; m <= m_first + 96; ++m) {
            mpq_class v = 1 + slope * (2 * m - p + 1) / 2;
            if (beta_zero)
                v += mpq_class(digit_sum(m) - digit_sum(2 * m), p - 1);
            else
                v -= mpq_class(m, p - 1) - mpq_class(m, p - 1);  // no factorial credit claimed
            v.canonicalize();
            if (best < 0 || v < best) best = v;
        }
        if (!beta_zero) best = mpq_class(0);  // honest: tail uncontrolled
        tail_horizon = best;
    }

    const PiLaurent& result = coeffs[0];
    // Materialize u * pi^{-m}: m rotations, each costing one p-division of
    // the constant coordinate (the pessimistic per-digit loss).
    std::vector<mpz_class> c = result.u.pi_adic().c;
    std::vector<int> trusted(c.size(), n_prec);
    for (int step = 0; step < result.shift; ++step) {
        if (trusted[0] <= 0)
            fail("ReductionDiverged",
                 "tracked precision exhausted after " + std::to_string(step) + " pi-divisions");
        mpz_class c0 = c[0];
        mpz_class pz(p);
        mpz_class pn;
        mpz_ui_pow_ui(pn.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(trusted[0]));
        mpz_class rem;
        mpz_mod(rem.get_mpz_t(), c0.get_mpz_t(), pz.get_mpz_t());
        if (rem != 0)
            fail("ReductionDiverged", "class is not pi-integral at the tracked precision");
        std::vector<mpz_class> nc(c.size());
        std::vector<int> nt(c.size());
        for (size_t j = 0; j + 1 < c.size(); ++j) {
            nc[j] = c[j + 1];
            nt[j] = trusted[j + 1];
        }
        nc[c.size() - 1] = -c0 / p;
        nt[c.size() - 1] = trusted[0] - 1;
        c = std::move(nc);
        trusted = std::move(nt);
    }

    FrobeniusEigenvalue out;
    out.trusted = trusted;
    // Zero untrusted digits for the canonical representative.
    RingElement::PiAdicPayload pay;
    pay.c.assign(c.size(), mpz_class(0));
    mpq_class horizon(n_prec);
    for (size_t k = 0; k < c.size(); ++k) {
        int t = std::max(0, trusted[k]);
        mpz_class mod;
        mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(t));
        if (t > 0) mpz_mod(pay.c[k].get_mpz_t(), c[k].get_mpz_t(), mod.get_mpz_t());
        mpq_class tk = mpq_class(t) + mpq_class(static_cast<long>(k), p - 1);
        tk.canonicalize();
        if (tk < horizon) horizon = tk;
    }
    out.alpha = RingElement(ring, pay);
    out.horizon = horizon;

    auto val = pi_adic_valuation(out.alpha);
    if (!val || *val >= horizon)
        fail("ReductionDiverged", "eigenvalue indistinguishable from zero at tracked precision");
    out.valuation = *val;

    out.alpha_squared = out.alpha * out.alpha;
    out.squared_horizon = horizon + out.valuation;
    out.precision_ok = horizon > out.valuation && out.squared_horizon > 1;
    return out;
}

}  // namespace twd
