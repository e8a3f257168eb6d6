#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "twderham/error.hpp"

namespace twd {

/// Dense univariate polynomial over Q. Backs the rational-function
/// coefficient field used by the families module and the Picard-Fuchs
/// operator coefficients. Coefficient i is the coefficient of var^i;
/// no trailing zeros are stored.
class UniPolyQ {
  public:
    UniPolyQ() = default;
    explicit UniPolyQ(std::vector<mpq_class> coeffs);
    static UniPolyQ constant(const mpq_class& c);
    static UniPolyQ variable();

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    const mpq_class& coeff(int i) const;
    const std::vector<mpq_class>& coeffs() const { return c_; }

    UniPolyQ operator+(const UniPolyQ& o) const;
    UniPolyQ operator-(const UniPolyQ& o) const;
    UniPolyQ operator-() const;
    UniPolyQ operator*(const UniPolyQ& o) const;
    UniPolyQ scaled(const mpq_class& s) const;
    UniPolyQ derivative() const;
    mpq_class eval(const mpq_class& x) const;
    bool operator==(const UniPolyQ& o) const { return c_ == o.c_; }

    /// Euclidean division; requires a nonzero divisor.
    static void divmod(const UniPolyQ& a, const UniPolyQ& b, UniPolyQ& q, UniPolyQ& r);
    static UniPolyQ gcd(UniPolyQ a, UniPolyQ b);  // monic gcd, 0 for (0,0)

    UniPolyQ monic() const;
    /// Smallest positive rational s such that s * this has coprime integer
    /// coefficients; the zero polynomial yields 1.
    mpq_class content_inverse() const;

    std::string str(const std::string& var) const;

  private:
    void trim();
    std::vector<mpq_class> c_;
};

class RingElement;

/// Tagged description of a coefficient ring. Values are immutable and
/// cheap to copy; equality is structural.
///
/// RationalFunctions is an internal kind (the field Q(lambda) of reduced
/// fractions) used by the Milnor/families machinery; it is not part of
/// the CLI ring mini-language.
class RingSpec {
  public:
    enum class Kind { Integers, Rationals, Modular, Series, PiAdic, RationalFunctions };
    struct Rep;

    static RingSpec integers();
    static RingSpec rationals();
    static RingSpec modular(mpz_class modulus);
    static RingSpec series(const RingSpec& base, std::string var, int order);
    static RingSpec pi_adic(int prime, int precision, int default_cutoff = 0);
    static RingSpec rational_functions(std::string var = "lambda");

    Kind kind() const;
    bool is_field() const;    // Rationals, RationalFunctions
    bool has_torsion() const; // Modular, PiAdic, Series over those

    const mpz_class& modulus() const;     // Modular
    RingSpec base() const;                // Series
    const std::string& variable() const;  // Series / RationalFunctions
    int order() const;                    // Series truncation N
    int prime() const;                    // PiAdic
    int precision() const;                // PiAdic N
    int default_cutoff() const;           // PiAdic D annotation (0 = unset)
    const mpz_class& pi_adic_modulus() const;  // p^N, cached

    bool operator==(const RingSpec& o) const;
    bool operator!=(const RingSpec& o) const { return !(*this == o); }

    std::string str() const;
    /// Mini-language: ZZ | QQ | Zmod:m | series:<base...>:var:N | padic:p=..:N=..[:D=..]
    static RingSpec parse(const std::string& text);

    RingElement zero() const;
    RingElement one() const;
    RingElement from_int(long v) const;
    RingElement from_mpz(const mpz_class& v) const;
    /// Rationals/RationalFunctions directly; other kinds require the
    /// denominator to be a unit (DenominatorNotInvertible otherwise).
    RingElement from_mpq(const mpq_class& v) const;

  private:
    explicit RingSpec(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
    std::shared_ptr<const Rep> rep_;
};

/// Element of a RingSpec in canonical form: reduced fraction with positive
/// denominator, residue in [0, m), series coefficient vector of length N,
/// pi-adic coefficient vector of length p-1 with entries in [0, p^N),
/// reduced fraction of polynomials with monic denominator.
class RingElement {
  public:
    struct PiAdicPayload {
        std::vector<mpz_class> c;  // coefficients of pi^0..pi^{p-2}
        bool operator==(const PiAdicPayload&) const = default;
    };
    struct RatFunPayload {
        UniPolyQ num, den;  // den monic, gcd(num, den) = 1
        bool operator==(const RatFunPayload&) const = default;
    };
    using Payload = std::variant<mpz_class, mpq_class, std::vector<RingElement>,
                                 PiAdicPayload, RatFunPayload>;

    RingElement() : RingElement(RingSpec::integers().zero()) {}
    RingElement(RingSpec spec, Payload payload);

    const RingSpec& spec() const { return spec_; }

    bool is_zero() const;
    bool is_one() const;
    bool is_unit() const;

    RingElement operator+(const RingElement& o) const;
    RingElement operator-(const RingElement& o) const;
    RingElement operator*(const RingElement& o) const;
    RingElement operator-() const;
    RingElement& operator+=(const RingElement& o) { return *this = *this + o; }
    RingElement& operator-=(const RingElement& o) { return *this = *this - o; }
    RingElement& operator*=(const RingElement& o) { return *this = *this * o; }
    bool operator==(const RingElement& o) const;
    bool operator!=(const RingElement& o) const { return !(*this == o); }

    RingElement inverse() const;  // NotAUnit when no inverse exists

    const mpz_class& integer_value() const;   // Integers / Modular
    const mpq_class& rational_value() const;  // Rationals
    const std::vector<RingElement>& series_coeffs() const;
    const PiAdicPayload& pi_adic() const;
    const RatFunPayload& rat_fun() const;

    /// Formal derivative in the coefficient field Q(var); only for
    /// RationalFunctions elements.
    RingElement derivative() const;

    std::string str() const;

  private:
    void canonicalize();
    RingSpec spec_;
    Payload v_;
};

// Spec-named wrappers around the operators.
RingElement ring_add(const RingElement& a, const RingElement& b);
RingElement ring_mul(const RingElement& a, const RingElement& b);
RingElement ring_neg(const RingElement& a);
RingElement ring_inverse(const RingElement& a);

/// A supported ring homomorphism. Construction validates the (from, to)
/// pair; application may still fail per-element (DenominatorNotInvertible).
/// Supported: Integers->Rationals, Integers->Modular, Rationals->Modular,
/// Integers->PiAdic, Rationals->PiAdic, identity on any spec, and
/// Series(B,v,N)->Series(B',v,N) lifting a supported base map.
class RingHom {
  public:
    RingHom(RingSpec from, RingSpec to);
    const RingSpec& from() const { return from_; }
    const RingSpec& to() const { return to_; }

  private:
    RingSpec from_, to_;
};

RingElement hom_apply(const RingHom& h, const RingElement& a);

/// pi-adic valuation of a PiAdic element, in units where v(p) = 1 and
/// v(pi) = 1/(p-1). Returns nullopt when the element is indistinguishable
/// from zero at the ring's precision (valuation >= N).
std::optional<mpq_class> pi_adic_valuation(const RingElement& a);

}  // namespace twd
