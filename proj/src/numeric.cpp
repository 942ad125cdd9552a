#include "gramkit/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gramkit {

void TolerancePolicy::validate() const {
    if (!(relative_rank_cutoff > 0.0) || !(relative_rank_cutoff < 1.0))
        throw InvalidInput("relative_rank_cutoff must lie in (0, 1)");
    if (!(equality_tolerance > 0.0))
        throw InvalidInput("equality_tolerance must be positive");
    if (!(condition_limit > 0.0))
        throw InvalidInput("condition_limit must be positive");
}

Index SvdFactorization::rank() const {
    const double top = largest();
    if (top <= 0.0) return 0;
    const double cut = rank_tolerance * top;
    Index r = 0;
    while (r < singular.size() && singular(r) > cut) ++r;
    return r;
}

double SvdFactorization::smallest_nonzero() const {
    const Index r = rank();
    return r == 0 ? 0.0 : singular(r - 1);
}

bool SvdFactorization::rank_ambiguous() const {
    const double top = largest();
    if (top <= 0.0) return false;
    const double lo = rank_tolerance * top / 10.0;
    const double hi = rank_tolerance * top * 10.0;
    for (Index i = 1; i < singular.size(); ++i)
        if (singular(i) >= lo && singular(i) <= hi) return true;
    return false;
}

void require_finite(const LinearMap& a, const char* what) {
    if (!a.allFinite())
        throw InvalidInput(std::string(what) + ": matrix has non-finite entries");
}

SvdFactorization svd(const LinearMap& a, const TolerancePolicy& pol) {
    require_finite(a, "svd");
    SvdFactorization f;
    f.rank_tolerance = pol.relative_rank_cutoff;
    if (a.rows() == 0 || a.cols() == 0) {
        f.left = LinearMap::Identity(a.rows(), a.rows());
        f.right = LinearMap::Identity(a.cols(), a.cols());
        f.singular = RealVector(0);
        return f;
    }
    Eigen::BDCSVD<LinearMap> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    f.left = solver.matrixU();
    f.right = solver.matrixV();
    f.singular = solver.singularValues();
    return f;
}

SvdFactorization singular_values(const LinearMap& a, const TolerancePolicy& pol) {
    require_finite(a, "singular_values");
    SvdFactorization f;
    f.rank_tolerance = pol.relative_rank_cutoff;
    f.singular = a.size() ? RealVector(Eigen::BDCSVD<LinearMap>(a).singularValues()) : RealVector(0);
    return f;
}

RealVector squared_singular_values_of(const LinearMap& a) {
    if (a.size() == 0) return RealVector(0);
    const LinearMap g = a.rows() <= a.cols() ? LinearMap(a * a.adjoint()) : LinearMap(a.adjoint() * a);
    Eigen::SelfAdjointEigenSolver<LinearMap> eig(g, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().reverse().cwiseMax(0.0);
}

LinearMap hermitian_pseudo_inverse(const LinearMap& h, const TolerancePolicy& pol) {
    require_finite(h, "hermitian_pseudo_inverse");
    if (h.size() == 0) return LinearMap(h.cols(), h.rows());
    Eigen::SelfAdjointEigenSolver<LinearMap> eig(h);
    const RealVector& lam = eig.eigenvalues();
    const double top = lam.cwiseAbs().maxCoeff();
    LinearMap x = LinearMap::Zero(h.rows(), h.cols());
    if (top <= 0.0) return x;
    for (Index i = 0; i < lam.size(); ++i)
        if (std::abs(lam(i)) > pol.relative_rank_cutoff * top)
            x.noalias() += (eig.eigenvectors().col(i) / lam(i)) * eig.eigenvectors().col(i).adjoint();
    return x;
}

LinearMap pseudo_inverse(const SvdFactorization& f) {
    const Index r = f.rank();
    LinearMap x = LinearMap::Zero(f.cols(), f.rows());
    for (Index i = 0; i < r; ++i)
        x.noalias() += (f.right.col(i) / f.singular(i)) * f.left.col(i).adjoint();
    return x;
}

LinearMap pseudo_inverse(const LinearMap& a, const TolerancePolicy& pol) {
    return pseudo_inverse(svd(a, pol));
}

PseudoInverse pseudo_inverse_checked(const LinearMap& a, const TolerancePolicy& pol) {
    const auto f = svd(a, pol);
    return {pseudo_inverse(f), f.rank(), f.rank_ambiguous()};
}

double operator_norm(const LinearMap& a) {
    if (a.size() == 0) return 0.0;
    require_finite(a, "operator_norm");
    return std::sqrt(squared_singular_values_of(a)(0));
}

Index numeric_rank(const LinearMap& a, const TolerancePolicy& pol) {
    return svd(a, pol).rank();
}

double smallest_singular_value(const LinearMap& a) {
    if (a.size() == 0) return 0.0;
    require_finite(a, "smallest_singular_value");
    Eigen::BDCSVD<LinearMap> solver(a);
    const auto& s = solver.singularValues();
    return s(s.size() - 1);
}

LinearMap range_basis(const LinearMap& a, const TolerancePolicy& pol) {
    const auto f = svd(a, pol);
    return f.left.leftCols(f.rank());
}

LinearMap kernel_basis(const LinearMap& a, const TolerancePolicy& pol) {
    const auto f = svd(a, pol);
    return f.right.rightCols(f.cols() - f.rank());
}

LinearMap range_projector(const LinearMap& a, const TolerancePolicy& pol) {
    const LinearMap q = range_basis(a, pol);
    return q * q.adjoint();
}

LinearMap kernel_projector(const LinearMap& a, const TolerancePolicy& pol) {
    const LinearMap q = kernel_basis(a, pol);
    return q * q.adjoint();
}

double range_distance(const LinearMap& a, const LinearMap& b, const TolerancePolicy& pol) {
    if (a.rows() != b.rows())
        throw InvalidInput("range comparison needs equal row counts, got " + shape_string(a) +
                           " and " + shape_string(b));
    return operator_norm(range_projector(a, pol) - range_projector(b, pol));
}

bool range_equal(const LinearMap& a, const LinearMap& b, const TolerancePolicy& pol) {
    return range_distance(a, b, pol) <= pol.equality_tolerance;
}

double kernel_distance(const LinearMap& a, const LinearMap& b, const TolerancePolicy& pol) {
    if (a.cols() != b.cols())
        throw InvalidInput("kernel comparison needs equal column counts, got " + shape_string(a) +
                           " and " + shape_string(b));
    return operator_norm(kernel_projector(a, pol) - kernel_projector(b, pol));
}

bool is_invertible(const SvdFactorization& f, Index rows, Index cols, const TolerancePolicy& pol) {
    if (rows != cols) return false;
    if (rows == 0) return true;
    if (f.rank() != rows) return false;
    return f.largest() <= pol.condition_limit * f.singular(rows - 1);
}

bool is_invertible(const LinearMap& a, const TolerancePolicy& pol) {
    if (a.rows() != a.cols()) return false;
    return is_invertible(singular_values(a, pol), a.rows(), a.cols(), pol);
}

LinearMap inverse(const LinearMap& a, const TolerancePolicy& pol) {
    const auto f = svd(a, pol);
    if (!is_invertible(f, a.rows(), a.cols(), pol))
        throw PreconditionFailed("matrix " + shape_string(a) + " is not numerically invertible");
    return pseudo_inverse(f);
}

double relative_residual(const LinearMap& a, const LinearMap& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InvalidInput("residual of mismatched shapes " + shape_string(a) + " vs " +
                           shape_string(b));
    const double scale = std::max({1.0, operator_norm(a), operator_norm(b)});
    return operator_norm(a - b) / scale;
}

bool approx_equal(const LinearMap& a, const LinearMap& b, double tol) {
    return relative_residual(a, b) <= tol;
}

bool strictly_less(double lhs, double rhs, double guard) {
    return lhs < rhs - guard * std::abs(rhs);
}

LinearMap identity(Index n) { return LinearMap::Identity(n, n); }

std::string shape_string(const LinearMap& a) {
    std::ostringstream os;
    os << a.rows() << "x" << a.cols();
    return os.str();
}

}  // namespace gramkit
