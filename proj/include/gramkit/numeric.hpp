#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gramkit {

using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Dense complex matrix. Used for every operator between finite-dimensional
/// spaces: U, S_Φ, synthesis matrices, projectors and identities alike.
using LinearMap = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Malformed input: wrong shapes, non-finite entries, bad parameters.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input is well formed but a hypothesis the operation needs does not hold.
class PreconditionFailed : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An identity that must hold by theorem failed numerically. Always a bug or
/// a tolerance misconfiguration, never an expected outcome.
class TheoremViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct TolerancePolicy {
    double relative_rank_cutoff = 1e-10;
    double equality_tolerance = 1e-9;
    double condition_limit = 1e12;

    /// Throws InvalidInput unless all fields are positive and the cutoff < 1.
    void validate() const;
};

struct SvdFactorization {
    LinearMap left;          // rows x rows
    RealVector singular;     // min(rows, cols), nonincreasing
    LinearMap right;         // cols x cols
    double rank_tolerance = 0.0;

    Index rows() const { return left.rows(); }
    Index cols() const { return right.rows(); }
    double largest() const { return singular.size() ? singular(0) : 0.0; }
    Index rank() const;
    /// Smallest singular value counted in the numeric rank; 0 when rank is 0.
    double smallest_nonzero() const;
    /// True when some σ falls inside [cutoff/10, cutoff·10] around the rank cliff.
    bool rank_ambiguous() const;
};

void require_finite(const LinearMap& a, const char* what);

SvdFactorization svd(const LinearMap& a, const TolerancePolicy& pol = {});

LinearMap pseudo_inverse(const LinearMap& a, const TolerancePolicy& pol = {});
LinearMap pseudo_inverse(const SvdFactorization& f);

/// Singular values only; left/right factors stay empty.
SvdFactorization singular_values(const LinearMap& a, const TolerancePolicy& pol = {});

/// σ_i² in nonincreasing order, from the smaller of AA*, A*A.
RealVector squared_singular_values_of(const LinearMap& a);

/// Pseudo-inverse of a Hermitian matrix by eigendecomposition.
LinearMap hermitian_pseudo_inverse(const LinearMap& h, const TolerancePolicy& pol = {});

struct PseudoInverse {
    LinearMap matrix;
    Index rank = 0;
    bool rank_ambiguous = false;
};
PseudoInverse pseudo_inverse_checked(const LinearMap& a, const TolerancePolicy& pol = {});

double operator_norm(const LinearMap& a);
Index numeric_rank(const LinearMap& a, const TolerancePolicy& pol = {});
/// σ_min over all min(rows, cols) singular values (not just the numeric rank).
double smallest_singular_value(const LinearMap& a);

/// Orthonormal basis (as columns) of ran A and of ker A.
LinearMap range_basis(const LinearMap& a, const TolerancePolicy& pol = {});
LinearMap kernel_basis(const LinearMap& a, const TolerancePolicy& pol = {});

/// Orthogonal projector onto ran A (A A†) and onto ker A (I − A†A).
LinearMap range_projector(const LinearMap& a, const TolerancePolicy& pol = {});
LinearMap kernel_projector(const LinearMap& a, const TolerancePolicy& pol = {});

/// ‖P − Q‖ for the projectors onto ran A and ran B (same row count).
double range_distance(const LinearMap& a, const LinearMap& b, const TolerancePolicy& pol = {});
bool range_equal(const LinearMap& a, const LinearMap& b, const TolerancePolicy& pol = {});
double kernel_distance(const LinearMap& a, const LinearMap& b, const TolerancePolicy& pol = {});

/// Square and numerically invertible: full rank and σ₁/σ_min ≤ condition_limit.
bool is_invertible(const LinearMap& a, const TolerancePolicy& pol = {});
bool is_invertible(const SvdFactorization& f, Index rows, Index cols, const TolerancePolicy& pol = {});
/// Inverse through the SVD; throws PreconditionFailed when not invertible.
LinearMap inverse(const LinearMap& a, const TolerancePolicy& pol = {});

/// ‖a − b‖ ≤ tol · max(1, ‖a‖, ‖b‖).
double relative_residual(const LinearMap& a, const LinearMap& b);
bool approx_equal(const LinearMap& a, const LinearMap& b, double tol);

/// Strict inequality with a relative guard band, so boundary cases never pass.
bool strictly_less(double lhs, double rhs, double guard = 1e-9);

LinearMap identity(Index n);

std::string shape_string(const LinearMap& a);

}  // namespace gramkit
