#include "rsgslm/view_graph.hpp"

#include <cmath>

#include "rsgslm/simplex.hpp"

namespace rsgslm {

Mat pairwise_sq_dists(const Mat& x) {
  const auto n = x.rows();
  Vec sq = x.rowwise().squaredNorm();
  Mat d = sq.replicate(1, n) + sq.transpose().replicate(n, 1) - 2.0 * (x * x.transpose());
  d.diagonal().setZero();
  return d.cwiseMax(0.0);
}

Mat step_graph(const Mat& x, const Mat& f, const SolverConfig& cfg) {
  const auto n = x.rows();
  if (n < 2) throw DataError("graph step needs at least 2 samples");
  const Mat p = 0.5 * pairwise_sq_dists(x) + (0.5 * cfg.eta) * pairwise_sq_dists(f);
  Mat s = Mat::Zero(n, n);
  Vec row(n - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) row(k++) = -p(i, j) / (2.0 * cfg.gamma);
    Vec proj = simplex_project(row);
    k = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) s(i, j) = proj(k++);
  }
  return s;
}

std::pair<Mat, Vec> step_projection(const Mat& x, const Mat& f, const SolverConfig& cfg) {
  const Vec xm = x.colwise().mean();
  const Vec fm = f.colwise().mean();
  const Mat xc = x.rowwise() - xm.transpose();
  const Mat fc = f.rowwise() - fm.transpose();
  Mat lhs = xc.transpose() * xc;
  lhs.diagonal().array() += 1.0 / cfg.alpha;
  Mat q = lhs.ldlt().solve(xc.transpose() * fc);
  Vec b = fm - q.transpose() * xm;
  return {std::move(q), std::move(b)};
}

Mat step_labels(const Mat& x, const Mat& s, const Mat& q, const Vec& b, const Mat& y,
                const Vec& u, const SolverConfig& cfg) {
  const Mat a_sym = 0.5 * (s + s.transpose());
  Mat lhs = -cfg.eta * a_sym;
  lhs.diagonal() += cfg.eta * a_sym.rowwise().sum() + u;
  lhs.diagonal().array() += cfg.mu * cfg.alpha;
  Mat rhs = u.asDiagonal() * y +
            cfg.mu * cfg.alpha * ((x * q).rowwise() + b.transpose());
  Eigen::LLT<Mat> llt(lhs);
  if (llt.info() != Eigen::Success)
    throw NumericError("label step: linear system is not positive definite");
  return llt.solve(rhs);
}

double surrogate_objective(const Mat& x, const Mat& s, const Mat& f, const Mat& q,
                           const Vec& b, const Mat& y, const Vec& u,
                           const SolverConfig& cfg) {
  const Mat p = 0.5 * pairwise_sq_dists(x) + (0.5 * cfg.eta) * pairwise_sq_dists(f);
  const Mat fit = ((x * q).rowwise() + b.transpose()) - f;
  return s.cwiseProduct(p).sum() +
         (u.asDiagonal() * (f - y)).cwiseProduct(f - y).sum() +
         cfg.gamma * s.squaredNorm() +
         cfg.mu * (q.squaredNorm() + cfg.alpha * fit.squaredNorm());
}

ViewGraphResult solve_view_graph(const Mat& x, const std::vector<int>& labels,
                                 const Mask& train_mask, int num_classes,
                                 const SolverConfig& cfg) {
  cfg.validate();
  const auto n = x.rows();
  if (static_cast<Eigen::Index>(labels.size()) != n ||
      static_cast<Eigen::Index>(train_mask.size()) != n)
    throw DataError("solver: labels/mask length does not match feature rows");
  if (mask_count(train_mask) < 1) throw DataError("solver needs at least one labeled node");

  Mat y = Mat::Zero(n, num_classes);
  Vec u = Vec::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (train_mask[i]) {
      y(i, labels[i]) = 1.0;
      u(i) = cfg.u_label;
    }

  ViewGraphResult r;
  r.F = y;
  r.Q = Mat::Zero(x.cols(), num_classes);
  r.b = Vec::Zero(num_classes);

  double prev = 0.0;
  for (int it = 0; it < cfg.outer_iters; ++it) {
    r.S = step_graph(x, r.F, cfg);
    std::tie(r.Q, r.b) = step_projection(x, r.F, cfg);
    r.F = step_labels(x, r.S, r.Q, r.b, y, u, cfg);
    double j = surrogate_objective(x, r.S, r.F, r.Q, r.b, y, u, cfg);
    if (!std::isfinite(j)) throw NumericError("solver objective diverged");
    r.surrogate_objective_trace.push_back(j);
    if (it > 0 && std::abs(prev - j) < cfg.rel_tol * std::max(1.0, std::abs(prev))) break;
    prev = j;
  }
  return r;
}

}  // namespace rsgslm
