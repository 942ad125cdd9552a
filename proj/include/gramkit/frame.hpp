#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gramkit/certificate.hpp"
#include "gramkit/numeric.hpp"

namespace gramkit {

/// A finite indexed family {φ_i} in ℂⁿ, stored as the n×m synthesis matrix
/// T whose j-th column is φ_j. The frame operator S = T T* and the squared
/// singular values of T are computed once at construction.
class FrameSystem {
public:
    FrameSystem() : FrameSystem(LinearMap(0, 0)) {}
    explicit FrameSystem(LinearMap synthesis);

    static FrameSystem from_vectors(Index dim, const std::vector<Vector>& vectors);
    /// The standard orthonormal basis {δ_i} of ℂᵐ.
    static FrameSystem standard(Index m);

    Index dim() const { return synthesis_.rows(); }
    Index count() const { return synthesis_.cols(); }

    const LinearMap& synthesis() const { return synthesis_; }
    LinearMap analysis() const { return synthesis_.adjoint(); }
    const LinearMap& frame_operator() const { return frame_operator_; }
    /// σ_i(T)², nonincreasing; these are the nonzero-candidate eigenvalues of S.
    const RealVector& squared_singular_values() const { return squared_singular_; }
    /// The Gram matrix T*T.
    LinearMap gram() const { return synthesis_.adjoint() * synthesis_; }

    Vector element(Index i) const { return synthesis_.col(i); }

    Vector synthesize(const Vector& coefficients) const;
    Vector analyze(const Vector& f) const;

    /// Bessel bound B = σ₁(T)².
    double bessel_bound() const;

    /// {U φ_i}, living in the codomain of U.
    FrameSystem mapped(const LinearMap& op) const;
    FrameSystem scaled(Complex factor) const { return FrameSystem(synthesis_ * factor); }

private:
    LinearMap synthesis_;
    LinearMap frame_operator_;
    RealVector squared_singular_;
};

struct FrameBounds {
    double lower = 0.0;   // optimal frame-sequence bound on span{φ_i}
    double upper = 0.0;   // Bessel bound
    bool spanning = false;
};

enum class FrameKind { BesselOnly, FrameSequence, Frame, RieszSequence, RieszBasis, OrthonormalBasis };

std::string_view to_string(FrameKind kind);

struct FrameClass {
    FrameKind kind = FrameKind::BesselOnly;
    double lower = 0.0;
    double upper = 0.0;
    bool spanning = false;
    Index rank = 0;

    bool is_frame() const;           // spans the ambient space
    bool is_riesz_sequence() const;  // injective synthesis
    bool is_riesz_basis() const;
};

Vector synthesize(const FrameSystem& f, const Vector& c);
Vector analyze(const FrameSystem& f, const Vector& x);
LinearMap frame_operator(const FrameSystem& f);

FrameBounds frame_bounds(const FrameSystem& f, const TolerancePolicy& pol = {});
FrameClass classify(const FrameSystem& f, const TolerancePolicy& pol = {});

/// S†Φ; equals S⁻¹Φ when Φ spans. Its synthesis satisfies T_Φ̃ T_Φ* = π_{span Φ}.
FrameSystem canonical_dual(const FrameSystem& f, const TolerancePolicy& pol = {});

/// ‖T_F T_G* − I‖ ≤ tol, i.e. x = Σ⟨x, g_i⟩ f_i for all x.
Certificate is_dual_pair(const FrameSystem& f, const FrameSystem& g, const TolerancePolicy& pol = {});

/// Duality restricted to a subspace with orthogonal projector P:
/// ‖T_F T_G* P − P‖ ≤ tol.
Certificate is_dual_pair_on(const FrameSystem& f, const FrameSystem& g, const LinearMap& projector,
                            const TolerancePolicy& pol = {});

/// (Σ‖φ_i − ψ_i‖²)^{1/2}, the Frobenius distance of the synthesis matrices.
double element_distance(const FrameSystem& a, const FrameSystem& b);

}  // namespace gramkit
