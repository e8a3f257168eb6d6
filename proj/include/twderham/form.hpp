#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twderham/poly.hpp"

namespace twd {

/// Polynomial differential form. Components are keyed by the index subset
/// of the wedge dx_{s1} ^ ... ^ dx_{sk} with s1 < ... < sk, stored as a
/// bitmask (bit i = dx_{i+1} present). The empty mask is the 0-form part.
class Form {
  public:
    Form() : Form(RingSpec::integers(), 0) {}
    Form(RingSpec spec, int nvars);
    static Form from_poly(const Poly& p);
    static Form differential(const RingSpec& spec, int nvars, int i);  // dx_{i+1}
    static Form volume(const RingSpec& spec, int nvars);               // dx_1 ^ ... ^ dx_n

    const RingSpec& spec() const { return spec_; }
    int nvars() const { return nvars_; }
    bool is_zero() const { return comps_.empty(); }
    const std::map<uint64_t, Poly>& components() const { return comps_; }
    Poly component(uint64_t mask) const;

    /// True when every component has wedge degree k.
    bool is_homogeneous(int k) const;
    /// Wedge degree when homogeneous; nullopt for 0 or mixed forms.
    std::optional<int> degree() const;

    void add_component(uint64_t mask, const Poly& p);

    Form operator+(const Form& o) const;
    Form operator-(const Form& o) const;
    Form operator-() const;
    Form scaled(const Poly& p) const;          // p ^ omega for a 0-form p
    Form scaled(const RingElement& c) const;
    bool operator==(const Form& o) const;
    bool operator!=(const Form& o) const { return !(*this == o); }

    /// Interior product with the polynomial vector field eta (one
    /// component per variable).
    Form contract(const std::vector<Poly>& eta) const;
    /// Lie derivative along eta, defined as the derivation with
    /// L(g) = eta(g) on functions and L(dx_i) = d(eta_i); independent of
    /// the Cartan-formula route so the two can be compared.
    Form lie_derivative(const std::vector<Poly>& eta, int active_vars = -1) const;

    /// Same form viewed on a larger variable set.
    Form padded(int new_nvars) const;

    Form map_coefficients(const RingSpec& target,
                          const std::function<RingElement(const RingElement&)>& f) const;

    std::string str(const std::vector<std::string>& var_names) const;
    std::string str() const;

  private:
    RingSpec spec_;
    int nvars_;
    std::map<uint64_t, Poly> comps_;  // nonzero components only
};

Form wedge(const Form& a, const Form& b);
/// Exterior derivative; when active_vars >= 0 only d/dx_1..d/dx_active
/// contribute (the fiberwise differential of the families module).
Form de_rham_d(const Form& omega, int active_vars = -1);

/// Twisted complex d_f = d + df ^ . ; f may be handed over as a closed
/// one-form directly since only df enters anywhere.
class TwistedComplex {
  public:
    TwistedComplex(const Poly& f, int active_vars = -1);
    TwistedComplex(const Form& df, int active_vars = -1);  // NotClosed if d(df) != 0

    const RingSpec& spec() const { return df_.spec(); }
    int nvars() const { return df_.nvars(); }
    int active_vars() const { return active_; }
    const std::optional<Poly>& f() const { return f_; }
    const Form& df() const { return df_; }

  private:
    std::optional<Poly> f_;
    Form df_;
    int active_;
};

Form twisted_d(const TwistedComplex& complex, const Form& omega);

/// Pullback along phi: K^m -> K^n given by n polynomials in m variables;
/// phi_i is the image of x_i. Ring homomorphism on 0-forms, dx_i -> d(phi_i).
Form pullback(const std::vector<Poly>& phi, const Form& omega);

Form base_change(const RingHom& h, const Form& omega);

}  // namespace twd
