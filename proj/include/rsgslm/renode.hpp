#pragma once

#include <vector>

#include "rsgslm/common.hpp"
#include "rsgslm/config.hpp"

namespace rsgslm {

// Per-labeled-node conflict scores and the loss weights derived from them.
// Entries are ordered by ascending node index.
struct NodeWeightTable {
  std::vector<int> node_index;
  Vec totoro;
  std::vector<int> rank;  // 0-based, ascending in totoro, ties by node index
  Vec weight;             // in [w_min, w_max]
};

// P = xi (I - (1 - xi) A_hat)^{-1}, dense solve.
Mat personalized_pagerank(const Mat& a_hat, double xi);

// Conflict score of labeled node i: the inner product of its influence row
// P_i with the mean influence rows of every class other than its own,
// T_i = sum_{j != y_i} <P_i, m_j>, m_j = mean of P rows over train nodes of
// class j. Returned in ascending node-index order over labeled nodes.
Vec totoro_scores(const Mat& p, const std::vector<int>& labels, const Mask& train_mask,
                  int num_classes);

// Stable 0-based ascending ranks (ties broken by position).
std::vector<int> ascending_ranks(const Vec& values);

// w_i = w_min + (w_max - w_min)/2 * (1 + cos(rank_i * pi / m)) over m scores.
Vec cosine_weights(const Vec& totoro, double w_min, double w_max);

// Full re-weighting pass over a fused operator.
NodeWeightTable compute_node_weights(const Mat& a_hat, const std::vector<int>& labels,
                                     const Mask& train_mask, int num_classes,
                                     const ReNodeConfig& cfg);

// Scatter table weights into a length-n vector, 1.0 on unlabeled nodes.
Vec expand_weights(const NodeWeightTable& table, int n);

}  // namespace rsgslm
