#pragma once

#include <initializer_list>

#include "doctest.h"
#include "gramkit/frame.hpp"
#include "gramkit/numeric.hpp"

namespace gramkit::test {

inline LinearMap mat(std::initializer_list<std::initializer_list<double>> rows) {
    LinearMap m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
    Index i = 0;
    for (const auto& r : rows) {
        Index j = 0;
        for (double v : r) m(i, j++) = v;
        ++i;
    }
    return m;
}

inline LinearMap diag(std::initializer_list<double> d) {
    LinearMap m = LinearMap::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
    Index i = 0;
    for (double v : d) m(i, i) = v, ++i;
    return m;
}

// Columns are the frame elements; entries are real multiples of basis vectors.
inline FrameSystem frame(Index dim, std::initializer_list<std::initializer_list<double>> vectors) {
    LinearMap t(dim, static_cast<Index>(vectors.size()));
    Index j = 0;
    for (const auto& v : vectors) {
        Index i = 0;
        for (double x : v) t(i++, j) = x;
        ++j;
    }
    return FrameSystem(t);
}

inline FrameSystem onb(Index n) { return FrameSystem::standard(n); }
inline FrameSystem e1e1e2() { return frame(2, {{1, 0}, {1, 0}, {0, 1}}); }

inline double gap(const LinearMap& a, const LinearMap& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace gramkit::test
