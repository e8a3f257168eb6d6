#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twderham/matrix.hpp"
#include "twderham/poly.hpp"

namespace twd {

/// Element of K[lambda]/(lambda^N): the value space of perturbative
/// normalized integrals.
class LambdaSeries {
  public:
    LambdaSeries(RingSpec base, int order);
    static LambdaSeries constant(const RingSpec& base, int order, const RingElement& c);

    const RingSpec& base() const { return base_; }
    int order() const { return order_; }
    const RingElement& coeff(int i) const { return c_[static_cast<size_t>(i)]; }
    void set_coeff(int i, RingElement v);
    const std::vector<RingElement>& coeffs() const { return c_; }

    bool is_zero() const;
    LambdaSeries operator+(const LambdaSeries& o) const;
    LambdaSeries operator-(const LambdaSeries& o) const;
    LambdaSeries operator*(const LambdaSeries& o) const;
    LambdaSeries operator-() const;
    LambdaSeries scaled(const RingElement& c) const;
    /// Multiplication by lambda^k (drops the top k coefficients).
    LambdaSeries shifted(int k) const;
    bool operator==(const LambdaSeries& o) const;
    bool operator!=(const LambdaSeries& o) const { return !(*this == o); }

    LambdaSeries map_coefficients(const RingHom& h) const;

    std::string str() const;

  private:
    RingSpec base_;
    int order_;
    std::vector<RingElement> c_;
};

/// f = (1/2) x^t A x + lambda V with A an invertible symmetric matrix over
/// the base ring; V's constant term is quotiented away by the
/// normalization and is dropped on construction (constant_dropped records
/// that this happened).
struct GaussianProblem {
    GaussianProblem(SquareMatrix a, Poly v, int lambda_order);

    const RingSpec& spec() const { return A.spec(); }
    int n() const { return A.size(); }

    SquareMatrix A;
    SquareMatrix A_inv;
    Poly V;
    int order;
    bool constant_dropped = false;
};

enum class PivotStrategy { Leftmost, Random };

struct IntegrateOptions {
    PivotStrategy pivot = PivotStrategy::Leftmost;
    uint64_t seed = 0;
    /// The normalized integral is only claimed over torsion-free rings;
    /// tests opt in to run the rewriting over Z/m for the base-change
    /// functoriality checks.
    bool allow_torsion = false;
    /// 0 = derive the cap from deg(g), deg(V) and the lambda order.
    uint64_t step_cap = 0;
};

struct IntegrateStats {
    uint64_t steps = 0;
};

/// The normalized functional I(g): the unique K[lambda]/(lambda^N)-linear
/// functional with I(1) = 1 vanishing on d_a h + (d_a f) h, computed by
/// the rewriting rule
///   I(x_k g') = -sum_a (A^-1)_{ka} [ I(d_a g') + lambda I((d_a V) g') ].
/// g may live over the base ring or over K[lambda]/(lambda^N) (a
/// TruncatedSeries spec with variable "lambda" and the problem's order).
LambdaSeries integrate(const GaussianProblem& problem, const Poly& g,
                       const IntegrateOptions& opts = {}, IntegrateStats* stats = nullptr);

/// integrate applied to d_a h + (d_a f) h; the contract is that the result
/// is the zero series.
LambdaSeries check_vanishing(const GaussianProblem& problem, const Poly& h, int var,
                             const IntegrateOptions& opts = {});

/// Independent verifier for the lambda^0 layer: sum over perfect matchings
/// of the variable multiset of m, each pair contributing (-A^-1)_{ij};
/// zero for odd total degree.
RingElement wick_oracle(const SquareMatrix& a, const Monomial& m);

struct IntegralityReport {
    LambdaSeries over_integers;
    LambdaSeries over_rationals;
    bool all_integer = false;  // every rational coefficient has denominator 1
    bool paths_match = false;  // Z-path equals Q-path under Z -> Q
};

/// Runs the integral over Z (A must be invertible over Z, i.e. unimodular;
/// MatrixNotUnimodular otherwise) and over Q, asserting integrality of the
/// Q-side coefficients and agreement of the two paths.
IntegralityReport integrality_report(const SquareMatrix& a, const Poly& v, const Poly& g,
                                     int lambda_order);

}  // namespace twd
