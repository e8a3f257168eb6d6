#pragma once

#include <string>
#include <utility>
#include <vector>

#include "twderham/form.hpp"
#include "twderham/matrix.hpp"
#include "twderham/poly.hpp"

namespace twd {

/// Groebner basis in degrevlex over a field, with each element carrying
/// its representation in terms of the original generators (needed to turn
/// ideal membership into d_f-exactness certificates).
struct GroebnerBasis {
    struct Element {
        Poly p;
        std::vector<Poly> cofactors;  // p = sum_a cofactors[a] * gens[a]
    };
    std::vector<Poly> gens;
    std::vector<Element> elems;

    bool contains_unit() const;
};

GroebnerBasis buchberger(std::vector<Poly> gens);

/// Remainder of division by the basis; when gen_cofactors is non-null it
/// receives q with p = remainder + sum_a q[a] * gens[a].
Poly normal_form(const Poly& p, const GroebnerBasis& gb, std::vector<Poly>* gen_cofactors = nullptr);

/// Jacobian-ideal data of f: Groebner basis, monomial basis of the
/// quotient (the Milnor ring), and its dimension mu.
struct MilnorData {
    Poly f;
    GroebnerBasis gb;
    std::vector<Monomial> basis;  // display order: degree, then x1-major

    int mu() const { return static_cast<int>(basis.size()); }
    int basis_index(const Monomial& m) const;  // -1 if not a basis monomial
};

/// Computes the Milnor data of f over a field (Rationals or the internal
/// rational-function field). NotZeroDimensional when the Jacobian ideal
/// has infinitely many standard monomials (non-isolated critical points).
MilnorData milnor_basis(const Poly& f);

struct ReductionResult {
    std::vector<RingElement> coords;  // in basis order
    Form witness;                     // (n-1)-form h with g dx - sum c_b b dx = d_f h
    int passes = 0;
};

/// Milnor-basis coordinates of the class [g dx^1..dx^n], by iterated
/// Groebner division with the exactness correction
///   sum_a q_a (d_a f) dx = d_f(sum_a q_a i_a(dx)) - (sum_a d_a q_a) dx.
ReductionResult reduce_nform_certified(const MilnorData& m, const Poly& g);
std::vector<RingElement> reduce_nform(const MilnorData& m, const Poly& g);

/// Recomputes the reduction, checks the coordinates, verifies the identity
/// g dx - sum c_b b dx = d_f(h) by direct expansion and returns h.
Form exactness_witness(const MilnorData& m, const Poly& g, const std::vector<RingElement>& coords);

/// For the quadratic exponent f = (1/2) x^t A x over any ring in which A
/// is invertible: reduce g dx^1..dx^n to scalar * dx^1..dx^n with an
/// explicit d_f-exactness witness. Works over rings, not just fields (no
/// Groebner bases involved; only A^-1 and derivatives).
std::pair<RingElement, Form> quadratic_reduce(const SquareMatrix& a, const Poly& g);

struct QuadraticRankReport {
    bool ok = false;
    int degree_cap = 0;
    int forms_checked = 0;
    RingElement volume_class;  // reduction of dx^1..dx^n; must be 1
    std::vector<std::string> failures;
};

/// Checks rank-one concentration for the quadratic twisted complex: every
/// n-form of total degree <= degree_cap reduces to a scalar multiple of
/// the volume form, certified by an expanded exactness witness.
QuadraticRankReport quadratic_rank_check(const SquareMatrix& a, int degree_cap);

}  // namespace twd
