#include "gramkit/random.hpp"

#include <algorithm>
#include <cmath>

namespace gramkit {

LinearMap random_matrix(Rng& rng, Index rows, Index cols) {
    std::normal_distribution<double> normal;
    LinearMap m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = Complex(normal(rng), normal(rng));
    return m;
}

LinearMap random_unitary(Rng& rng, Index n) {
    const Eigen::HouseholderQR<LinearMap> qr(random_matrix(rng, n, n));
    LinearMap q = qr.householderQ();
    const LinearMap r = qr.matrixQR();
    for (Index j = 0; j < n; ++j) {
        const double a = std::abs(r(j, j));
        if (a > 0) q.col(j) *= r(j, j) / a;
    }
    return q;
}

LinearMap random_with_singular_values(Rng& rng, Index rows, Index cols, double lo, double hi) {
    std::uniform_real_distribution<double> uniform(lo, hi);
    const Index k = std::min(rows, cols);
    LinearMap d = LinearMap::Zero(rows, cols);
    for (Index i = 0; i < k; ++i) d(i, i) = uniform(rng);
    return random_unitary(rng, rows) * d * random_unitary(rng, cols).adjoint();
}

LinearMap random_invertible(Rng& rng, Index n, double lo, double hi) {
    return random_with_singular_values(rng, n, n, lo, hi);
}

LinearMap random_rank(Rng& rng, Index rows, Index cols, Index r) {
    std::uniform_real_distribution<double> uniform(0.5, 2.0);
    LinearMap d = LinearMap::Zero(rows, cols);
    for (Index i = 0; i < std::min({r, rows, cols}); ++i) d(i, i) = uniform(rng);
    return random_unitary(rng, rows) * d * random_unitary(rng, cols).adjoint();
}

FrameSystem random_frame(Rng& rng, Index dim, Index count, double lo, double hi) {
    return FrameSystem(random_with_singular_values(rng, dim, count, lo, hi));
}

FrameSystem random_tight_frame(Rng& rng, Index dim, Index count, double c) {
    return FrameSystem(std::sqrt(c) * random_unitary(rng, count).topRows(dim));
}

LinearMap random_direction(Rng& rng, Index rows, Index cols) {
    LinearMap m = random_matrix(rng, rows, cols);
    const double norm = operator_norm(m);
    return norm > 0 ? LinearMap(m / norm) : m;
}

}  // namespace gramkit
