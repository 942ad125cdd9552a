#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gramkit/certificate.hpp"
#include "gramkit/frame.hpp"
#include "gramkit/numeric.hpp"

namespace gramkit {

struct NeumannResult {
    LinearMap inverse;
    Index terms = 0;               // K: powers 0..K summed
    double ratio = 0.0;            // r = ‖U₁⁻¹‖‖U₁ − U₂‖
    double truncation_bound = 0.0;  // r^{K+1}/(1−r)·‖U₁⁻¹‖
    double residual = 0.0;         // ‖U₂·inverse − I‖
};

inline constexpr Index kNeumannTermCap = 10000;

/// U₂⁻¹ = Σ_k [U₁⁻¹(U₁−U₂)]^k U₁⁻¹. K is the smallest count with
/// r^{K+1}/(1−r)·‖U₁⁻¹‖‖U₂‖ ≤ equality_tolerance. Throws PreconditionFailed
/// when U₁ is singular, r ≥ 1, or K would exceed the term cap.
NeumannResult neumann_inverse(const LinearMap& u1, const LinearMap& u2, const TolerancePolicy& pol = {});

/// The partial sum with powers 0..terms, no stopping rule.
LinearMap neumann_partial_sum(const LinearMap& u1, const LinearMap& u2, Index terms,
                              const TolerancePolicy& pol = {});

/// A Certificate plus the perturbation witness. Holds ⇒ the perturbed Gram
/// matrix was verified invertible (witness σ_min above the rank cutoff).
struct StabilityCertificate : Certificate {
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs − lhs
    std::optional<double> witness_sigma_min;
    std::optional<LinearMap> series_inverse;
    std::optional<double> series_residual;  // ‖series − direct‖ / ‖direct‖
    std::optional<double> truncation_bound;
};

/// ‖U₂*U₁U₃ − U₁‖ < 1/(‖G⁻¹‖B_Φ) with G = G_{U₁,Φ,Φ}; certifies
/// G_{U₁,U₂Φ,U₃Φ} invertible, with the series inverse when Φ spans.
StabilityCertificate stability_three_ops(const LinearMap& u1, const LinearMap& u2, const LinearMap& u3,
                                         const FrameSystem& phi, const TolerancePolicy& pol = {});

/// ‖U₂ − I‖ < 1/(‖G⁻¹‖B_Φ‖U₁‖); certifies G_{U₁,Φ,U₂Φ} and G_{U₁,U₂Φ,Φ}
/// invertible, with the closed-form inverses when Φ spans.
StabilityCertificate stability_factor(const LinearMap& u1, const LinearMap& u2, const FrameSystem& phi,
                                      const TolerancePolicy& pol = {});

/// C1 (operator V), C2 (Θ replacing the right frame Ψ) and C3 (Ξ replacing the
/// left frame Φ). Only the certificates whose perturbation is supplied are
/// returned, in that order.
std::vector<StabilityCertificate> perturb_certificates(const LinearMap& op,
                                                       const std::optional<LinearMap>& perturbed_op,
                                                       const FrameSystem& phi, const FrameSystem& psi,
                                                       const std::optional<FrameSystem>& xi,
                                                       const std::optional<FrameSystem>& theta,
                                                       const TolerancePolicy& pol = {});

/// Σ‖Uψ_i − φ_i‖² < A_Φ²/B_Φ for a Riesz basis Φ certifies G_{U,Φ,Ψ}
/// invertible with G⁻¹ = Σ(I − T_Φ⁻¹UT_Ψ)^k G_Φ⁻¹.
StabilityCertificate riesz_perturbation(const LinearMap& op, const FrameSystem& phi,
                                        const FrameSystem& psi, const TolerancePolicy& pol = {});

struct StabilityBudget {
    double lambda1 = 0.0, lambda2 = 0.0, lambda3 = 0.0, lambda4 = 0.0;
    double mu = 0.0;

    double lambda() const { return lambda1 + lambda2 + lambda3 + lambda4; }
};

struct JointOptions {
    std::uint64_t seed = 0xC0FFEE;
    Index samples = 10000;  // random coefficient vectors tried against the pointwise hypothesis
};

/// Joint perturbation (V, Ξ, Θ) of (U, Φ, Ψ) under a λ/μ budget. The pointwise
/// hypothesis is replaced by its operator-norm consequence and stress-tested
/// on random coefficient vectors; then the three budget inequalities.
StabilityCertificate joint_stability(const LinearMap& op, const LinearMap& perturbed_op,
                                     const FrameSystem& phi, const FrameSystem& psi,
                                     const FrameSystem& xi, const FrameSystem& theta,
                                     const StabilityBudget& budget, const JointOptions& options = {},
                                     const TolerancePolicy& pol = {});

struct ConvergenceStep {
    LinearMap op;
    FrameSystem phi;
    FrameSystem psi;
};

struct ConvergenceRow {
    Index step = 0;  // 1-based
    double deviation = 0.0;  // ‖G_{Uₙ,Φⁿ,Ψⁿ} − G_{U,Φ,Ψ}‖
    double bound = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;

    /// Deviation nonincreasing from `from` (1-based) on, up to `slack`.
    bool decays_after(Index from, double slack) const;
};

/// Deviation of each Gram matrix from the limit, and the bound
/// ‖T_{Φⁿ}*Uₙ‖‖T_{Ψⁿ}−T_Ψ‖ + (‖T_{Φⁿ}−T_Φ‖‖Uₙ‖ + ‖T_Φ‖‖Uₙ−U‖)‖T_Ψ‖.
/// A deviation above its bound throws TheoremViolation.
ConvergenceTable convergence_harness(const std::vector<ConvergenceStep>& sequence,
                                     const ConvergenceStep& limit, const TolerancePolicy& pol = {});

}  // namespace gramkit
