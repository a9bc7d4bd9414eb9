#include "rsgslm/gcn.hpp"

#include <cmath>

#include "rsgslm/rng.hpp"

namespace rsgslm {

Mat concat_features(const std::vector<Mat>& fs) {
  if (fs.empty()) throw DataError("concat_features: no matrices");
  const auto n = fs[0].rows();
  Eigen::Index width = 0;
  for (const auto& f : fs) {
    if (f.rows() != n) throw DataError("concat_features: row count mismatch");
    width += f.cols();
  }
  Mat out(n, width);
  Eigen::Index col = 0;
  for (const auto& f : fs) {
    out.middleCols(col, f.cols()) = f;
    col += f.cols();
  }
  return out;
}

Mat propagation_operator(const FusedGraph& fused, bool add_self_loops) {
  if (!add_self_loops) return fused.A_hat;
  Mat a = fused.A_sym;
  a.diagonal().array() += 1.0;
  // Self-loops guarantee positive degrees, so no isolated-node special case.
  Vec dinv_sqrt = a.rowwise().sum().cwiseSqrt().cwiseInverse();
  return dinv_sqrt.asDiagonal() * a * dinv_sqrt.asDiagonal();
}

GcnParams init_params(std::uint64_t seed, int in_dim, int hidden_dim, int out_dim) {
  if (in_dim < 1 || hidden_dim < 1 || out_dim < 1)
    throw UsageError("layer dimensions must be positive");
  Rng rng(seed);
  GcnParams p;
  p.W0 = rng.glorot(in_dim, hidden_dim);
  p.W1 = rng.glorot(hidden_dim, out_dim);
  return p;
}

Mat softmax_rows(const Mat& logits) {
  Mat z = logits;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    Vec row = z.row(i);
    row.array() -= row.maxCoeff();
    row = row.array().exp();
    z.row(i) = row / row.sum();
  }
  return z;
}

GcnForwardTrace gcn_forward(const GcnParams& params, const Mat& op, const Mat& features) {
  // (A X) W, in that order: at label-space widths the propagated matrix is
  // narrow, so this pairing is the cheap one.
  GcnForwardTrace t;
  t.P0 = op * features;
  t.H1_pre = t.P0 * params.W0;
  if (!t.H1_pre.allFinite())
    throw NumericError("gcn forward produced non-finite hidden activations");
  t.H1 = t.H1_pre.cwiseMax(0.0);
  t.P1 = op * t.H1;
  t.Z_pre = t.P1 * params.W1;
  if (!t.Z_pre.allFinite())
    throw NumericError("gcn forward produced non-finite logits");
  t.Z = softmax_rows(t.Z_pre);
  return t;
}

GcnGrads gcn_backward(const GcnParams& params, const Mat& op, const GcnForwardTrace& trace,
                      const Mat& grad_z) {
  // Row-wise softmax jacobian: dZ_pre = Z .* (G - rowsum(G .* Z)).
  const Vec inner = (grad_z.cwiseProduct(trace.Z)).rowwise().sum();
  const Mat d_zpre = trace.Z.cwiseProduct(grad_z.colwise() - inner);

  GcnGrads g;
  g.dW1 = trace.P1.transpose() * d_zpre;
  const Mat d_h1 = (op.transpose() * d_zpre) * params.W1.transpose();
  const Mat d_h1pre =
      d_h1.cwiseProduct((trace.H1_pre.array() > 0.0).cast<double>().matrix());
  g.dW0 = trace.P0.transpose() * d_h1pre;
  return g;
}

}  // namespace rsgslm
