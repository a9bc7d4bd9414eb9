#pragma once

#include "rsgslm/common.hpp"
#include "rsgslm/config.hpp"

namespace rsgslm {

// Pseudo-label ramp w_p as a function of the 1-based epoch; all four kinds
// are 0 at epoch 1 and non-decreasing.
double schedule_wp(int epoch, int max_epochs, ScheduleKind kind);

// Unnormalized masked cross-entropy: -sum_{i in mask} sum_j Y_ij ln(Z_ij + eps).
double cross_entropy(const Mat& z, const Mat& y, const Mask& mask);

// -(1/|L|) sum_{i in L} w_i sum_j Y_ij ln(Z_ij + eps).
double reweighted_ce(const Mat& z, const Mat& y, const Mask& train_mask, const Vec& weights);

// -w_p sum_{i in pool} sum_j Yprev_ij ln(Z_ij + eps); Yprev rows must be
// probability vectors and are treated as constants. normalize divides by the
// pool size.
double pseudo_label_ce(const Mat& z, const Mat& y_prev, const Mask& pool, double w_p,
                       bool normalize);

// Tr(Z^T L Z).
double smoothness(const Mat& z, const Mat& l_norm);

struct LossBreakdown {
  double ce_renode = 0.0;
  double pseudo = 0.0;
  double smooth = 0.0;
  double total = 0.0;
  double w_p = 0.0;
};

// Fixed tensors the loss reads alongside the prediction.
struct LossInputs {
  const Mat* y_onehot = nullptr;     // n x c ground truth
  const Mat* y_prev = nullptr;       // n x c pseudo targets (constant)
  const Mask* train_mask = nullptr;
  const Mask* pool_mask = nullptr;   // pseudo pool
  const Vec* weights = nullptr;      // length n, read on train nodes only
  const Mat* l_norm = nullptr;       // fused Laplacian (no self-loops)
};

// total = ce_renode + lambda1 * pseudo + lambda2 * smooth, with terms ablated
// per the config flags. If grad_z is non-null it receives d total / d Z
// (dense n x c), treating y_prev as constant.
LossBreakdown total_loss(const Mat& z, const LossInputs& in, int epoch, int max_epochs,
                         const LossConfig& cfg, Mat* grad_z = nullptr);

// argmax-row accuracy over a mask.
double masked_accuracy(const Mat& z, const std::vector<int>& labels, const Mask& mask);

}  // namespace rsgslm
