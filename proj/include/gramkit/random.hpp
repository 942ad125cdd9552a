#pragma once

#include <cstdint>
#include <random>

#include "gramkit/frame.hpp"
#include "gramkit/numeric.hpp"

namespace gramkit {

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

using Rng = std::mt19937_64;

/// Entries with independent standard normal real and imaginary parts.
LinearMap random_matrix(Rng& rng, Index rows, Index cols);

/// Haar-distributed unitary (QR of a Gaussian matrix, phases fixed).
LinearMap random_unitary(Rng& rng, Index n);

/// Q diag(s) W* with singular values drawn uniformly from [lo, hi].
LinearMap random_with_singular_values(Rng& rng, Index rows, Index cols, double lo, double hi);

/// Invertible n×n operator with singular values in [lo, hi].
LinearMap random_invertible(Rng& rng, Index n, double lo = 0.5, double hi = 2.0);

/// rows×cols operator of exact rank r, nonzero singular values in [0.5, 2].
LinearMap random_rank(Rng& rng, Index rows, Index cols, Index r);

/// count ≥ dim spanning frame whose synthesis has singular values in [lo, hi].
FrameSystem random_frame(Rng& rng, Index dim, Index count, double lo = 0.5, double hi = 1.5);

/// Tight frame with S = c·I: the first dim rows of a count×count unitary, scaled by √c.
FrameSystem random_tight_frame(Rng& rng, Index dim, Index count, double c = 1.0);

/// Unit-norm operator, for perturbation directions.
LinearMap random_direction(Rng& rng, Index rows, Index cols);

}  // namespace gramkit
