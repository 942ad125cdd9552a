#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gramkit/certificate.hpp"
#include "gramkit/frame.hpp"
#include "gramkit/numeric.hpp"

namespace gramkit {

/// ‖I − T_Φ T_Ψ*‖. Φ and Ψ are approximate duals when this is below 1.
double approx_dual_defect(const FrameSystem& phi, const FrameSystem& psi);

struct SufficientCondition {
    std::string name;         // "(1)" .. "(4)"
    std::string orientation;  // "primal" or "swapped" (Φ↔Ψ, Φd↔Ψd)
    double lhs = 0.0;
    double threshold = 0.0;
    bool holds = false;
    std::string implies;      // the pair whose defect the condition bounds
};

struct ApproxDualCertificate {
    double defect = 0.0;       // defect(Φ, Ψ)
    double dual_defect = 0.0;  // defect(Φd, Ψd)
    std::vector<SufficientCondition> conditions;
    bool conclusion = false;       // Φ, Ψ certified approximate duals
    bool dual_conclusion = false;  // Φd, Ψd certified approximate duals

    const SufficientCondition* find(const std::string& name) const;
};

/// Conditions (1)–(3) against the given duals (canonical when omitted). Each
/// condition is evaluated in both orientations and the better margin is kept.
/// A passing condition whose implied defect is not below 1 throws
/// TheoremViolation; duals that fail verification throw PreconditionFailed.
ApproxDualCertificate sufficient_conditions(const FrameSystem& phi, const FrameSystem& psi,
                                            const std::optional<FrameSystem>& phi_dual = {},
                                            const std::optional<FrameSystem>& psi_dual = {},
                                            const TolerancePolicy& pol = {});

/// Condition (4): V a right inverse of U and
/// ‖I − G_{U,Ψ,Φ} G_{V,Φd,Φ}‖ < 1/√(B_Φ B_Φd). The composite equals G_{Ψ,Φ},
/// which is verified. Throws PreconditionFailed unless UV = I.
ApproxDualCertificate right_inverse_condition(const LinearMap& op, const LinearMap& right_inverse,
                                              const FrameSystem& phi, const FrameSystem& psi,
                                              const std::optional<FrameSystem>& phi_dual = {},
                                              const TolerancePolicy& pol = {});

/// For approximate duals that are Riesz bases,
/// ‖I − G_{Φ,Ψ}‖ < √(B_Φ B_Ψ / (A_Φ A_Ψ)). Inapplicable otherwise.
Certificate necessary_bound(const FrameSystem& phi, const FrameSystem& psi,
                            const TolerancePolicy& pol = {});

/// (T_Ψ T_Φ*)⁻¹Ψ, an exact dual of Φ. Requires defect(Φ, Ψ) < 1.
FrameSystem corrected_dual(const FrameSystem& phi, const FrameSystem& psi,
                           const TolerancePolicy& pol = {});

}  // namespace gramkit
