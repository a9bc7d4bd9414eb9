#pragma once

#include "rsgslm/common.hpp"

namespace rsgslm {

// Euclidean projection of v onto the probability simplex
// { s : s >= 0, sum(s) = 1 }, computed with the classic sort-and-threshold
// scheme in O(m log m). Throws NumericError on non-finite input.
Vec simplex_project(const Vec& v);

}  // namespace rsgslm
