#pragma once

#include <functional>
#include <vector>

#include "gramkit/certificate.hpp"
#include "gramkit/frame.hpp"
#include "gramkit/numeric.hpp"

namespace gramkit {

/// (Σσ_i^p)^{1/p}; a quasi-norm for 0 < p < 1.
double schatten_norm(const LinearMap& a, double p);

/// ℓ^q norm of each row, then the ℓ^p norm of those.
double mixed_norm(const LinearMap& m, double p, double q);

/// (Σ_i |⟨U e_i, f_i⟩|^p)^{1/p} for orthonormal bases E (domain) and F
/// (codomain), summed over the first min(|E|, |F|) indices. Bounded by
/// ‖U‖_p, with equality at the singular bases.
double onb_pair_functional(const LinearMap& op, const FrameSystem& domain_basis,
                           const FrameSystem& codomain_basis, double p,
                           const TolerancePolicy& pol = {});

/// Right and left singular vectors of U as orthonormal bases; they attain the
/// supremum in onb_pair_functional.
std::pair<FrameSystem, FrameSystem> singular_bases(const LinearMap& op);

struct SchattenReport {
    double p = 2.0;
    double norm_op = 0.0;            // ‖U‖_p
    double norm_gram = 0.0;          // ‖G‖_p
    double bound = 0.0;              // √(B_Φ B_Ψ)·‖U‖_p
    double diagonal_sum = 0.0;       // (Σ|⟨Uψ_i, φ_i⟩|^p)^{1/p}
    double mixed_p2 = 0.0;           // ‖G‖_{p,2}
    double frobenius_squared = 0.0;  // ‖G‖₂² via the singular values
    double entrywise_squared = 0.0;  // Σ|⟨Uψ_i, φ_l⟩|²
    std::vector<Check> checks;

    bool all_hold() const;
};

/// Quantitative form of the Schatten-class statements for G_{U,Φ,Ψ}:
/// the ideal bound, the Hilbert–Schmidt entrywise identity, the diagonal and
/// mixed-norm comparisons (p ≥ 1), and the trace-class diagonal check (p = 1).
SchattenReport schatten_gram_check(const LinearMap& op, const FrameSystem& left,
                                   const FrameSystem& right, double p,
                                   const TolerancePolicy& pol = {});

using OperatorGenerator = std::function<LinearMap(Index)>;
using FrameGenerator = std::function<FrameSystem(Index)>;

struct DecayRow {
    Index size = 0;
    double tail = 0.0;  // max_{i > n/2} Σ_l |⟨Uψ_i, φ_l⟩|²
};

struct DecayTable {
    std::vector<DecayRow> rows;
    bool monotone = false;  // tail nonincreasing along the sizes
    bool decays = false;    // monotone and the last tail is below the first (or zero)
};

/// Finite stand-in for compactness of G: the column tail of G over growing
/// truncations.
DecayTable truncation_decay(const OperatorGenerator& op, const FrameGenerator& left,
                            const FrameGenerator& right, const std::vector<Index>& sizes,
                            const TolerancePolicy& pol = {});

}  // namespace gramkit
