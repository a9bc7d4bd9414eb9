#include "rsgslm/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace rsgslm {

Vec simplex_project(const Vec& v) {
  const auto m = v.size();
  if (m < 1) throw NumericError("simplex_project: empty input");
  if (!v.allFinite()) throw NumericError("simplex_project: non-finite input");

  std::vector<double> u(v.data(), v.data() + m);
  std::sort(u.begin(), u.end(), std::greater<double>());

  // theta from the largest k with u_k - (sum of top k - 1)/k > 0; k=1 always
  // qualifies, so theta is always set.
  double css = 0.0, theta = 0.0;
  for (int k = 1; k <= m; ++k) {
    css += u[k - 1];
    double t = (css - 1.0) / k;
    if (u[k - 1] - t > 0.0) theta = t;
  }

  return (v.array() - theta).cwiseMax(0.0).matrix();
}

}  // namespace rsgslm
