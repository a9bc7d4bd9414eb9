#include "rsgslm/fusion.hpp"

#include <cmath>

namespace rsgslm {

NormalizedOps normalized_operators(const Mat& s) {
  NormalizedOps ops;
  ops.A_sym = 0.5 * (s + s.transpose());
  ops.degrees = ops.A_sym.rowwise().sum();
  const auto n = s.rows();
  Vec dinv_sqrt(n), connected(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool iso = ops.degrees(i) <= 0.0;
    dinv_sqrt(i) = iso ? 0.0 : 1.0 / std::sqrt(ops.degrees(i));
    connected(i) = iso ? 0.0 : 1.0;
  }
  ops.A_hat = dinv_sqrt.asDiagonal() * ops.A_sym * dinv_sqrt.asDiagonal();
  ops.L_norm = -ops.A_hat;
  ops.L_norm.diagonal() += connected;
  return ops;
}

double view_weight(const Mat& x, const Mat& s) {
  const NormalizedOps ops = normalized_operators(s);
  const double tr = (ops.L_norm * x).cwiseProduct(x).sum();
  if (tr < -1e-8)
    throw NumericError("view weight: smoothness trace is negative (broken Laplacian)");
  if (tr <= 1e-12) return 1e-6;
  return std::sqrt(tr);
}

FusedGraph fuse(const std::vector<Mat>& view_graphs, const Vec& alphas) {
  if (view_graphs.empty()) throw DataError("fuse: no view graphs");
  if (alphas.size() != static_cast<Eigen::Index>(view_graphs.size()))
    throw DataError("fuse: weights/views count mismatch");
  const auto n = view_graphs[0].rows();
  for (const auto& s : view_graphs)
    if (s.rows() != n || s.cols() != n)
      throw DataError("fuse: view graphs have mismatched shapes");
  if ((alphas.array() <= 0.0).any()) throw DataError("fuse: weights must be positive");

  FusedGraph g;
  g.alphas = alphas;
  g.S = Mat::Zero(n, n);
  for (std::size_t v = 0; v < view_graphs.size(); ++v) g.S += alphas(v) * view_graphs[v];
  g.S /= alphas.sum();
  NormalizedOps ops = normalized_operators(g.S);
  g.A_sym = std::move(ops.A_sym);
  g.A_hat = std::move(ops.A_hat);
  g.L_norm = std::move(ops.L_norm);
  return g;
}

}  // namespace rsgslm
