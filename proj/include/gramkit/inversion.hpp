#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gramkit/cross_gram.hpp"
#include "gramkit/frame.hpp"
#include "gramkit/numeric.hpp"

namespace gramkit {

// Invertibility, pseudo-inverses and special duals of U-cross Gram matrices.
//
// Every finite-dimensional operator has closed range, so the closed-range
// hypotheses become rank-stability checks: a singular value sitting within a
// decade of the rank cutoff marks the result "closed-range unreliable".

struct InversionReport {
    bool invertible = false;
    double condition = 0.0;
    bool left_riesz = false;   // Φ
    bool right_riesz = false;  // Ψ
    bool left_spanning = false;
    bool right_spanning = false;
    double left_sigma_min = 0.0;   // σ_min(T_Φ)
    double right_sigma_min = 0.0;  // σ_min(T_Ψ)
    double left_lower_bound = 0.0;   // 1/(√B_Ψ ‖G⁻¹‖ ‖U‖)
    double right_lower_bound = 0.0;  // 1/(√B_Φ ‖G⁻¹‖ ‖U‖)
    bool op_invertible = false;
    std::optional<double> inverse_residual;  // ‖G⁻¹ − G_{U⁻¹,Ψ̃,Φ̃}‖ / ‖G⁻¹‖
    std::optional<LinearMap> inverse;
};

/// Invertible G forces Φ and Ψ to be Riesz sequences with the quantitative
/// lower bound σ_min(T_Φ) ≥ 1/(√B_Ψ‖G⁻¹‖‖U‖); when both span, U is invertible
/// and G⁻¹ = G_{U⁻¹,Ψ̃,Φ̃}. Throws InvalidInput for non-square G and
/// TheoremViolation if a guaranteed conclusion fails.
InversionReport invert_gram(const LinearMap& op, const FrameSystem& left, const FrameSystem& right,
                            const TolerancePolicy& pol = {});

struct OneSidedReport {
    bool right_invertible = false;  // full row rank
    bool left_invertible = false;   // full column rank
    std::vector<Clause> clauses;

    bool all_clauses_hold() const;
};

/// Right inverse ⇒ Φ and U*Φ Riesz sequences (and, if Φ spans, Φ a Riesz
/// basis and UΨ a frame). Left inverse mirrors this for Ψ and UΨ.
OneSidedReport one_sided_diagnosis(const LinearMap& op, const FrameSystem& left,
                                   const FrameSystem& right, const TolerancePolicy& pol = {});

enum class DualSide { Phi, Psi };

struct SpecialDual {
    FrameSystem frame;
    DualSide side = DualSide::Phi;
    LinearMap gram_pinv;      // G† used in the construction
    LinearMap projector;      // π onto ran U (phi side) or ran U* (psi side)
    double duality_residual = 0.0;  // ‖T_dual T_primal* π − π‖
    double kernel_residual = 0.0;   // kernel identity from the construction
    bool rank_ambiguous = false;
};

/// phi side: {U T_Ψ G† δ_i}, a dual of Φ on ran U.
/// psi side: {U* T_Φ (G†)* δ_i}, a dual of Ψ on ran U*.
/// Requires Φ and Ψ to be frames.
SpecialDual special_dual(const LinearMap& op, const FrameSystem& left, const FrameSystem& right,
                         DualSide side, const TolerancePolicy& pol = {});

/// psi side: R(U*) = S_Ψ R(U*) with F = Ψ; phi side: R(U) = S_Φ R(U) with F = Φ.
bool range_condition(const LinearMap& op, const FrameSystem& frame, DualSide side,
                     const TolerancePolicy& pol = {});

struct Representation {
    std::string name;
    double residual = 0.0;  // ‖G† − candidate‖ / max(1, ‖G†‖)
    bool holds = false;
    bool guaranteed = false;  // theorem hypotheses met, so it must hold
};

struct SubspaceIdentity {
    std::string name;
    double residual = 0.0;  // projector distance
    bool holds = false;
};

struct PinvReport {
    CrossGram pinv;
    LinearMap gram;
    bool op_invertible = false;
    bool closed_range_unreliable = false;
    bool psi_range_condition = false;  // R(U*) = S_Ψ R(U*)
    bool phi_range_condition = false;  // R(U) = S_Φ R(U)
    SpecialDual phi_dual;
    SpecialDual psi_dual;
    std::vector<Representation> representations;
    std::vector<SubspaceIdentity> subspace_identities;

    const Representation* find(const std::string& name) const;
};

/// G† by SVD, and its representations as cross Gram matrices of duals.
/// With U invertible every representation is guaranteed. Otherwise each one
/// is guaranteed exactly when its range condition holds; a guaranteed
/// representation that fails throws TheoremViolation.
PinvReport pinv_gram(const LinearMap& op, const FrameSystem& left, const FrameSystem& right,
                     const TolerancePolicy& pol = {});

struct ImageFrameInverse {
    LinearMap formula;          // U*† S_Ψ⁻¹ U†
    LinearMap exact;            // (S_{UΨ})†
    double range_residual = 0.0;  // ‖S_{UΨ}·formula − π_{ran U}‖
    bool invariant_subspace = false;  // S_Ψ R(U*) = R(U*)
    bool formula_valid = false;
    double lower = 0.0, upper = 0.0;              // frame bounds of UΨ on ran U
    double lower_limit = 0.0, upper_limit = 0.0;  // m·A_Ψ and M·B_Ψ
};

/// Frame bounds of UΨ for ran U and the candidate U*†S_Ψ⁻¹U† for its inverse
/// frame operator. The candidate is exact when S_Ψ leaves R(U*) invariant.
ImageFrameInverse image_frame_inverse(const LinearMap& op, const FrameSystem& frame,
                                      const TolerancePolicy& pol = {});

struct TildeReport {
    CrossGram candidate;  // T_{(UΨ)~}* T_Φ̃
    LinearMap pinv;
    bool sufficient_condition = false;  // R(T_Φ*) = R(T_Φ* U): sufficient, not necessary
    bool range_condition = false;  // ker U*T_Φ = ker U*T_Φ̃ (S_Φ R(U) = R(U) for frames): exact
    double residual = 0.0;
    bool candidate_is_pinv = false;
};

/// (G_{U,Φ,Ψ})† = T_{(UΨ)~}* T_Φ̃ if and only if R(T_Φ*) = R(T_Φ*U). Both
/// directions are enforced. Φ may be a frame for ran U only.
TildeReport pinv_via_tilde(const LinearMap& op, const FrameSystem& left, const FrameSystem& right,
                           const TolerancePolicy& pol = {});

struct TransportedReport {
    LinearMap restricted;  // U₁ in orthonormal coordinates of R(U*) → R(U)
    CrossGram gram;        // G_{U₁,U₁Φ,U₁*Ψ}
    LinearMap pinv;
    CrossGram formula;     // G_{(U₁*U₁U₁*)⁻¹,Ψ̃,Φ̃}
    double residual = 0.0;
    Index rank = 0;
};

/// Restricts U to (ker U)⊥ → ran U, transports the frames there and checks
/// G_{U₁,U₁Φ,U₁*Ψ}† = G_{(U₁*U₁U₁*)⁻¹,Ψ̃,Φ̃}.
TransportedReport pinv_transported(const LinearMap& op, const FrameSystem& left,
                                   const FrameSystem& right, const TolerancePolicy& pol = {});

struct RangeWitness {
    double range_residual = 0.0;        // ran G vs ran T_{U*Φ}*
    double factor_range_residual = 0.0;  // G vs T_{UU†Φ}* T_{UΨ}
    double factor_corange_residual = 0.0;  // G vs T_{U*Φ}* T_{U†UΨ}
    bool holds = false;
};

RangeWitness gram_range_witness(const LinearMap& op, const FrameSystem& left,
                                const FrameSystem& right, const TolerancePolicy& pol = {});

}  // namespace gramkit
