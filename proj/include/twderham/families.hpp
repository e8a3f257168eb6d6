#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twderham/milnor.hpp"

namespace twd {

/// Moves a polynomial over Q in x_1..x_n and a distinguished parameter
/// variable (by index) into a polynomial in the remaining variables over
/// the rational-function field Q(var).
Poly to_function_field(const Poly& p, int param_index, const std::string& var = "lambda");

/// One-parameter family f_lambda on fixed X = K^n (the product case
/// X = Y x Lambda). The working coefficient field is Q(lambda).
struct FamilyProblem {
    /// f is a polynomial over Q in n+1 variables, the parameter last.
    /// Genericity (constant finite Milnor number at sample_count random
    /// rational parameter values, matching the generic-fiber mu) is
    /// checked on construction; GenericityFailure otherwise.
    explicit FamilyProblem(const Poly& f_with_param, uint64_t seed = 0, int sample_count = 3);

    int n = 0;
    Poly f_q;            // over Q, n+1 vars, parameter last
    Poly f_ff;           // over Q(lambda), n vars
    Poly df_dlambda_ff;  // d f / d lambda over Q(lambda), n vars
    MilnorData generic;  // Milnor data of the generic fiber
    int generic_mu = 0;
};

/// Gauss-Manin connection on the generic-fiber basis: coordinates of
/// [(d_lambda g + (d_lambda f) g) dx] for the class with the given
/// coordinates.
std::vector<RingElement> gm_connection_apply(const FamilyProblem& fam,
                                             const std::vector<RingElement>& coords);

struct LiftIndependenceReport {
    bool ok = false;
    Form primitive;  // i_eta omega, the explicit fiberwise primitive
    Form lhs, rhs;   // (L_eta + eta(f)) omega vs {d_f, i_eta} omega
};

/// Expands the anticommutator identity {d_Lambda + d_Lambda f, i_eta} =
/// L_eta + eta(f) term by term for a vertical polynomial vector field eta
/// (n components, polynomials in x and the parameter over Q) against a
/// form omega on X with fiber differentials only.
LiftIndependenceReport lift_independence_check(const FamilyProblem& fam,
                                               const std::vector<Poly>& eta, const Form& omega);

/// p_0(lambda) + p_1(lambda) D + ... + p_r(lambda) D^r annihilating the
/// periods of the seed class; coefficients cleared of denominators,
/// content-normalized, sign-fixed.
struct PicardFuchsOperator {
    std::vector<UniPolyQ> coeffs;  // lowest derivative order first
    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    std::string str(const std::string& var = "lambda") const;
};

/// Derives the Picard-Fuchs operator of the seed class [g0 dx] by
/// iterating the connection until the first Q(lambda)-linear dependence
/// (order <= generic mu; NoDependence if that bound is exceeded).
PicardFuchsOperator picard_fuchs(const FamilyProblem& fam, const Poly& seed);

}  // namespace twd
