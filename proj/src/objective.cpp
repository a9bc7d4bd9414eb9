#include "rsgslm/objective.hpp"

#include <cmath>

namespace rsgslm {

double schedule_wp(int epoch, int max_epochs, ScheduleKind kind) {
  if (epoch < 1 || epoch > max_epochs)
    throw UsageError("schedule epoch " + std::to_string(epoch) + " outside [1, " +
                     std::to_string(max_epochs) + "]");
  const double t = static_cast<double>(epoch - 1) / max_epochs;
  switch (kind) {
    case ScheduleKind::kLinear: return t;
    case ScheduleKind::kExponential: return std::exp(t) - 1.0;
    case ScheduleKind::kSqrt: return std::sqrt(t);
    case ScheduleKind::kSquare: return t * t;
  }
  return t;
}

double cross_entropy(const Mat& z, const Mat& y, const Mask& mask) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    if (!mask[i]) continue;
    for (Eigen::Index j = 0; j < z.cols(); ++j)
      if (y(i, j) != 0.0) loss -= y(i, j) * std::log(z(i, j) + kProbEps);
  }
  return loss;
}

double reweighted_ce(const Mat& z, const Mat& y, const Mask& train_mask, const Vec& weights) {
  const int m = mask_count(train_mask);
  if (m == 0) throw DataError("reweighted_ce: empty train mask");
  double loss = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    if (!train_mask[i]) continue;
    for (Eigen::Index j = 0; j < z.cols(); ++j)
      if (y(i, j) != 0.0) loss -= weights(i) * y(i, j) * std::log(z(i, j) + kProbEps);
  }
  return loss / m;
}

double pseudo_label_ce(const Mat& z, const Mat& y_prev, const Mask& pool, double w_p,
                       bool normalize) {
  double loss = 0.0;
  int m = 0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    if (!pool[i]) continue;
    ++m;
    const double row_sum = y_prev.row(i).sum();
    if (std::abs(row_sum - 1.0) > 1e-6 || y_prev.row(i).minCoeff() < -1e-12)
      throw NumericError("pseudo targets: row " + std::to_string(i) +
                         " is not a probability vector");
    for (Eigen::Index j = 0; j < z.cols(); ++j)
      loss -= y_prev(i, j) * std::log(z(i, j) + kProbEps);
  }
  if (normalize && m > 0) loss /= m;
  return w_p * loss;
}

double smoothness(const Mat& z, const Mat& l_norm) {
  return (l_norm * z).cwiseProduct(z).sum();
}

LossBreakdown total_loss(const Mat& z, const LossInputs& in, int epoch, int max_epochs,
                         const LossConfig& cfg, Mat* grad_z) {
  LossBreakdown out;
  if (grad_z) grad_z->setZero(z.rows(), z.cols());

  const Mat& y = *in.y_onehot;
  const Mask& train = *in.train_mask;
  const int m_train = mask_count(train);
  if (m_train == 0) throw DataError("total_loss: empty train mask");

  // Supervised term; flag off means unit weights, not a missing term.
  if (cfg.use_renode_weights) {
    out.ce_renode = reweighted_ce(z, y, train, *in.weights);
  } else {
    out.ce_renode = cross_entropy(z, y, train) / m_train;
  }
  if (grad_z) {
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      if (!train[i]) continue;
      const double w = cfg.use_renode_weights ? (*in.weights)(i) : 1.0;
      for (Eigen::Index j = 0; j < z.cols(); ++j)
        if (y(i, j) != 0.0)
          (*grad_z)(i, j) -= w * y(i, j) / (z(i, j) + kProbEps) / m_train;
    }
  }

  // The pseudo term carries its schedule factor w_p, so the breakdown
  // identity is simply total = ce + lambda1 * pseudo + lambda2 * smooth.
  if (cfg.use_pseudo) {
    out.w_p = schedule_wp(epoch, max_epochs, cfg.schedule);
    const Mask& pool = *in.pool_mask;
    out.pseudo = pseudo_label_ce(z, *in.y_prev, pool, out.w_p, cfg.normalize_pseudo);
    if (grad_z && out.w_p != 0.0) {
      double scale = cfg.lambda1 * out.w_p;
      if (cfg.normalize_pseudo) {
        const int m_pool = mask_count(pool);
        if (m_pool > 0) scale /= m_pool;
      }
      for (Eigen::Index i = 0; i < z.rows(); ++i) {
        if (!pool[i]) continue;
        for (Eigen::Index j = 0; j < z.cols(); ++j)
          (*grad_z)(i, j) -= scale * (*in.y_prev)(i, j) / (z(i, j) + kProbEps);
      }
    }
  }

  if (cfg.use_smooth) {
    const Mat lz = (*in.l_norm) * z;
    out.smooth = lz.cwiseProduct(z).sum();
    if (grad_z) *grad_z += (2.0 * cfg.lambda2) * lz;
  }

  out.total = out.ce_renode + cfg.lambda1 * out.pseudo + cfg.lambda2 * out.smooth;
  return out;
}

double masked_accuracy(const Mat& z, const std::vector<int>& labels, const Mask& mask) {
  int hits = 0, m = 0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    if (!mask[i]) continue;
    ++m;
    Eigen::Index best;
    z.row(i).maxCoeff(&best);
    hits += (static_cast<int>(best) == labels[i]) ? 1 : 0;
  }
  return m == 0 ? 0.0 : static_cast<double>(hits) / m;
}

}  // namespace rsgslm
