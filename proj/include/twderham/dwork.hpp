#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twderham/poly.hpp"

namespace twd {

/// One-variable truncated series with PiAdic coefficients; multiplication
/// truncates at the cutoff degree. Arithmetic is exact modulo p^N; the
/// cutoff is a representation limit, not a precision loss.
class TruncSeries {
  public:
    TruncSeries(RingSpec ring, int cutoff);  // zero series
    static TruncSeries one(const RingSpec& ring, int cutoff);

    const RingSpec& ring() const { return ring_; }
    int cutoff() const { return cutoff_; }
    const RingElement& coeff(int i) const { return a_[static_cast<size_t>(i)]; }
    void set_coeff(int i, RingElement v);

    bool is_zero() const;
    TruncSeries operator+(const TruncSeries& o) const;
    TruncSeries operator-(const TruncSeries& o) const;
    TruncSeries operator*(const TruncSeries& o) const;
    TruncSeries operator-() const;
    TruncSeries scaled(const RingElement& c) const;
    bool operator==(const TruncSeries& o) const;
    bool operator!=(const TruncSeries& o) const { return !(*this == o); }

    /// z -> z^k substitution (degrees beyond the cutoff drop).
    TruncSeries substitute_power(int k) const;
    TruncSeries derivative() const;
    /// Restriction to a smaller cutoff.
    TruncSeries truncated(int new_cutoff) const;

    std::string str() const;

  private:
    RingSpec ring_;
    int cutoff_;
    std::vector<RingElement> a_;
};

/// Dwork splitting series theta(z) = exp(pi z - pi z^p) to the cutoff
/// degree, computed through an exact ramified-Q staging layer (factorial
/// denominators cancel against pi powers before any modular reduction).
/// PrecisionExhausted when the overconvergence slope would push the whole
/// tail beyond precision: requires D (p-1) < N p^2.
TruncSeries dwork_theta(const RingSpec& ring, int cutoff);

/// The correcting factor exp(pi (f(x^p) - f(x))) for a one-variable f with
/// p-integral coefficients, at the given cutoff.
TruncSeries frobenius_correcting_factor(const RingSpec& ring, const Poly& f, int cutoff);

/// Frobenius on 0-forms: g -> exp(pi(f(x^p) - f(x))) g(x^p).
TruncSeries frobenius_apply_function(const RingSpec& ring, const Poly& f, const TruncSeries& g,
                                     int cutoff);
/// Frobenius on 1-forms w dx -> exp(pi(f(x^p) - f(x))) w(x^p) p x^{p-1} dx;
/// returns the dx coefficient.
TruncSeries frobenius_apply(const RingSpec& ring, const Poly& f, const TruncSeries& w, int cutoff);

/// dx coefficient of d_{pi f}(g) = (g' + pi f' g) dx.
TruncSeries twisted_d_coefficient(const RingSpec& ring, const Poly& f, const TruncSeries& g);

struct FrobeniusEigenvalue {
    RingElement alpha;          // trusted-digit representative
    std::vector<int> trusted;   // trusted p-digits per pi power
    mpq_class valuation;        // measured v(alpha)
    mpq_class horizon;          // minimum trusted valuation of alpha
    RingElement alpha_squared;  // representative of alpha^2
    mpq_class squared_horizon;  // trusted valuation of alpha^2
    bool precision_ok = false;
};

/// Eigenvalue of the corrected Frobenius on the one-dimensional top
/// cohomology (Milnor number 1 over Q, checked: MilnorMismatch otherwise).
/// The reduction back to the basis {dx} divides by pi; the loss is tracked
/// pessimistically and surfaces as the horizon. ReductionDiverged when the
/// tracked precision is exhausted before the reduction contracts.
FrobeniusEigenvalue frobenius_eigenvalue(const RingSpec& ring, const Poly& f, int cutoff);

/// a == b on every pi-adic digit trusted at the given valuation horizon.
bool pi_adic_congruent(const RingElement& a, const RingElement& b, const mpq_class& horizon);

/// Zeroes every digit beyond the valuation horizon (canonical trusted
/// representative for reporting).
RingElement pi_adic_truncate(const RingElement& a, const mpq_class& horizon);

}  // namespace twd
