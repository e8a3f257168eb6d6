#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twderham/form.hpp"

namespace twd {

/// Constraint elimination data: X cut out of Y = K^n by f_1..f_m, with an
/// ambient exponent f on Y. The auxiliary variables t_1..t_m occupy the
/// slots after the x variables in all output forms.
struct ConstraintProblem {
    /// Regularity is checked by proxy (Jacobian zero-dimensionality of
    /// g = f + sum t_i f_i plus randomized on-variety rank sampling); a
    /// failed proxy downgrades regularity_ok instead of failing, since the
    /// maps themselves stay well defined.
    ConstraintProblem(Poly ambient_f, std::vector<Poly> constraints, uint64_t seed = 0);

    int n = 0;
    int m = 0;
    Poly f;
    std::vector<Poly> constraints;
    Poly g_total;  // f + t_1 f_1 + ... + t_m f_m on n+m variables
    bool regularity_ok = true;
    std::string regularity_note;
};

/// Hypersurface delta map (m = 1): the lift omega~ of a representative on
/// Y goes to omega~ ^ dP ^ dt on K^{n+1} for the twisted complex of tP.
Form delta_map(const Poly& p, const Form& omega);

struct IntermediateImages {
    Form laurent_numerator;  // omega~ ^ dP, the numerator over P^pole_order
    int pole_order = 1;
    Form t_image;  // (-1)^i omega t^i / i! ^ dt on K^{n+1}
};

/// The two maps whose composition is delta_map: omega -> omega~ dP / P
/// into the Laurent complex, and omega / P^{i+1} -> (-1)^i omega t^i/i! dt.
/// FactorialNotInvertible when i! is not a unit in the coefficient ring.
IntermediateImages intermediate_maps(const Poly& p, const Form& omega, int pole_order);

/// Codimension-m map omega -> omega~ ^ df_1 ^ dt_1 ^ ... ^ df_m ^ dt_m on
/// Y x K^m; raises form degree by exactly 2m.
Form codim_m_map(const ConstraintProblem& cp, const Form& omega);

struct DeltaChainReport {
    bool ok = false;
    Form lhs;         // d_{tP}(delta_map(omega))
    Form rhs;         // delta_map of the P-reduced representative of d(omega)
    Form correction;  // delta_map(P * alpha) for the exhibited alpha
};

/// Chain-map certification: the two sides differ exactly by the image of
/// the explicit (P)-correction alpha with d(omega) = reduce_P(d omega) + P alpha.
DeltaChainReport delta_chain_check(const Poly& p, const Form& omega);

}  // namespace twd
