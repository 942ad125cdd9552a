#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gramkit/frame.hpp"
#include "gramkit/numeric.hpp"

namespace gramkit {

/// The triple (U, Φ, Ψ) a cross Gram matrix was built from.
/// U maps span(right) into the space of left.
struct Provenance {
    LinearMap op;
    FrameSystem left;   // Φ, indexes rows
    FrameSystem right;  // Ψ, indexes columns
};

/// G_{U,Φ,Ψ} with entries ⟨Uψ_j, φ_i⟩. Matrices read from files carry no
/// provenance; identities about U, Φ, Ψ are then unavailable.
struct CrossGram {
    LinearMap matrix;
    std::optional<Provenance> provenance;

    Index rows() const { return matrix.rows(); }
    Index cols() const { return matrix.cols(); }
};

/// T_Φ* U T_Ψ without any verification. Internal fast path.
LinearMap gram_matrix(const LinearMap& op, const FrameSystem& left, const FrameSystem& right);

/// Builds G_{U,Φ,Ψ} by the entrywise formula, checks it against T_Φ* U T_Ψ
/// and against ‖G‖ ≤ √(B_Φ B_Ψ)‖U‖. Throws InvalidInput when U does not map
/// dim(Ψ) into dim(Φ) and TheoremViolation if either check fails.
CrossGram cross_gram(const LinearMap& op, const FrameSystem& left, const FrameSystem& right,
                     const TolerancePolicy& pol = {});

/// (G_{U,Φ,Ψ})* = G_{U*,Ψ,Φ}.
CrossGram adjoint(const CrossGram& g);

enum class CompositionRule {
    General,        // U₁ T_Ψ T_Θ* U₂
    FrameOperator,  // inner frames coincide: U₁ S_Ψ U₂
    DualPair,       // inner frames dual: U₁ U₂
    MatrixOnly,     // provenance missing, plain product
};

std::string_view to_string(CompositionRule rule);

enum class ProvenanceMode { Fallback, Required };

struct Composition {
    CrossGram gram;
    CompositionRule rule = CompositionRule::MatrixOnly;
    double provenance_residual = 0.0;  // product vs cross_gram(recorded provenance)
};

/// G_{U₁,Φ,Ψ} G_{U₂,Θ,Ξ} = G_{U₁T_ΨT_Θ*U₂,Φ,Ξ}, with the operator simplified
/// when Θ = Ψ or when (Ψ, Θ) is a dual pair.
Composition compose(const CrossGram& first, const CrossGram& second, const TolerancePolicy& pol = {},
                    ProvenanceMode mode = ProvenanceMode::Fallback);

/// T_{Φd} G T_{Ψd}*; recovers U when Φd, Ψd are duals of Φ, Ψ.
LinearMap reconstruct_operator(const CrossGram& g, const FrameSystem& left_dual,
                               const FrameSystem& right_dual, const TolerancePolicy& pol = {});

struct Clause {
    std::string name;
    bool holds = false;
    double residual = 0.0;
};

struct IdentityGramReport {
    bool is_identity = false;
    double deviation = 0.0;  // ‖G − I‖ (infinite when G is not square)
    std::vector<Clause> clauses;

    bool all_clauses_hold() const;
};

/// When G_{U,Φ,Ψ} = I: both systems are Riesz bases, Φ = S_Φ U Ψ,
/// Ψ = S_Ψ U* Φ, U = T_Φ̃ T_Ψ̃* and U is invertible. Falsified clauses are
/// reported, not thrown.
IdentityGramReport identity_gram_diagnosis(const LinearMap& op, const FrameSystem& left,
                                           const FrameSystem& right, const TolerancePolicy& pol = {});

}  // namespace gramkit
