#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "twderham/ring.hpp"

namespace twd {

/// Exponent vector of fixed length. Total degree of the empty product is 0.
class Monomial {
  public:
    Monomial() = default;
    explicit Monomial(std::vector<int> exponents);
    static Monomial one(int nvars);
    static Monomial var(int nvars, int i, int power = 1);

    int nvars() const { return static_cast<int>(e_.size()); }
    int exponent(int i) const { return e_[static_cast<size_t>(i)]; }
    const std::vector<int>& exponents() const { return e_; }
    int total_degree() const;
    bool is_one() const { return total_degree() == 0; }

    Monomial operator*(const Monomial& o) const;
    bool divides(const Monomial& o) const;
    Monomial divide_by(const Monomial& o) const;  // requires o.divides(*this)
    static Monomial lcm(const Monomial& a, const Monomial& b);
    /// Exponent lowered by one in variable i; requires exponent(i) > 0.
    Monomial decremented(int i) const;

    bool operator==(const Monomial& o) const { return e_ == o.e_; }
    bool operator!=(const Monomial& o) const { return e_ != o.e_; }

    /// a < b in degree-reverse-lexicographic order (the project-wide
    /// monomial order: compare total degree, then the last differing
    /// exponent decides reversed).
    static bool degrevlex_less(const Monomial& a, const Monomial& b);
    /// Display / basis-listing order: total degree, then lexicographic on
    /// the exponent vector with x1 heaviest (so x1 lists before x2).
    static bool display_less(const Monomial& a, const Monomial& b);

    std::string str(const std::vector<std::string>& names) const;

  private:
    std::vector<int> e_;
};

struct DegRevLexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return Monomial::degrevlex_less(b, a);
    }
};

/// Sparse multivariate polynomial over a RingSpec. Terms are kept in
/// descending degrevlex order (leading term first); zero coefficients are
/// never stored.
class Poly {
  public:
    using TermMap = std::map<Monomial, RingElement, DegRevLexGreater>;

    /// Total degree sentinel of the zero polynomial ("-infinity").
    static constexpr int kZeroDegree = INT32_MIN;

    Poly() : Poly(RingSpec::integers(), 0) {}
    Poly(RingSpec spec, int nvars);
    static Poly zero(const RingSpec& spec, int nvars) { return Poly(spec, nvars); }
    static Poly constant(const RingSpec& spec, int nvars, const RingElement& c);
    static Poly variable(const RingSpec& spec, int nvars, int i);
    static Poly from_monomial(const RingSpec& spec, const Monomial& m, const RingElement& c);

    const RingSpec& spec() const { return spec_; }
    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    int total_degree() const;  // kZeroDegree for the zero polynomial
    size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    /// Leading term in degrevlex; requires a nonzero polynomial.
    const std::pair<const Monomial, RingElement>& leading_term() const;
    RingElement coefficient(const Monomial& m) const;
    RingElement constant_term() const;
    /// Drops the constant term, returning whether one was present.
    bool drop_constant_term();

    void add_term(const Monomial& m, const RingElement& c);

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly scaled(const RingElement& c) const;
    Poly pow(int k) const;
    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly derivative(int var) const;
    /// Same polynomial viewed in a larger variable set (new slots unused).
    Poly padded(int new_nvars) const;
    /// Substitute polynomials for the variables (all nvars at once); the
    /// images must share a spec and variable count.
    Poly substitute(const std::vector<Poly>& images) const;
    /// Partially evaluate one variable at a ring element; the result keeps
    /// the same variable count with exponent 0 in that slot.
    Poly eval_var(int var, const RingElement& value) const;
    RingElement eval(const std::vector<RingElement>& point) const;

    Poly map_coefficients(const RingSpec& target,
                          const std::function<RingElement(const RingElement&)>& f) const;

    std::string str(const std::vector<std::string>& names) const;
    std::string str() const;  // default names x1..xn

    static std::vector<std::string> default_names(int nvars);

  private:
    RingSpec spec_;
    int nvars_;
    TermMap terms_;
};

Poly base_change(const RingHom& h, const Poly& p);

}  // namespace twd
