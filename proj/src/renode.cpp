#include "rsgslm/renode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rsgslm {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Mat personalized_pagerank(const Mat& a_hat, double xi) {
  if (!(xi > 0.0 && xi <= 1.0)) throw UsageError("restart probability must lie in (0, 1]");
  const auto n = a_hat.rows();
  Mat system = -(1.0 - xi) * a_hat;
  system.diagonal().array() += 1.0;
  Eigen::PartialPivLU<Mat> lu(system);
  Mat p = xi * lu.solve(Mat::Identity(n, n));
  if (!p.allFinite())
    throw NumericError("personalized pagerank solve produced non-finite entries");
  return p;
}

Vec totoro_scores(const Mat& p, const std::vector<int>& labels, const Mask& train_mask,
                  int num_classes) {
  const std::vector<int> anchors = mask_indices(train_mask);
  if (anchors.empty()) throw DataError("totoro: no labeled nodes");

  // Mean influence row per class over its labeled nodes.
  Mat class_mean = Mat::Zero(num_classes, p.cols());
  std::vector<int> class_count(num_classes, 0);
  for (int i : anchors) {
    class_mean.row(labels[i]) += p.row(i);
    ++class_count[labels[i]];
  }
  for (int j = 0; j < num_classes; ++j) {
    if (class_count[j] == 0)
      throw DataError("totoro: class " + std::to_string(j) + " has no labeled node");
    class_mean.row(j) /= class_count[j];
  }
  const Vec mean_sum = class_mean.colwise().sum();

  Vec t(anchors.size());
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    const int i = anchors[k];
    t(k) = p.row(i).dot(mean_sum - class_mean.row(labels[i]).transpose());
  }
  return t;
}

std::vector<int> ascending_ranks(const Vec& values) {
  const int m = static_cast<int>(values.size());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values(a) < values(b); });
  std::vector<int> rank(m);
  for (int r = 0; r < m; ++r) rank[order[r]] = r;
  return rank;
}

Vec cosine_weights(const Vec& totoro, double w_min, double w_max) {
  const int m = static_cast<int>(totoro.size());
  if (m < 1) throw DataError("cosine_weights: no scores");
  const std::vector<int> rank = ascending_ranks(totoro);
  Vec w(m);
  for (int i = 0; i < m; ++i)
    w(i) = w_min + 0.5 * (w_max - w_min) * (1.0 + std::cos(rank[i] * kPi / m));
  return w;
}

NodeWeightTable compute_node_weights(const Mat& a_hat, const std::vector<int>& labels,
                                     const Mask& train_mask, int num_classes,
                                     const ReNodeConfig& cfg) {
  cfg.validate();
  NodeWeightTable table;
  table.node_index = mask_indices(train_mask);
  const Mat p = personalized_pagerank(a_hat, cfg.xi);
  table.totoro = totoro_scores(p, labels, train_mask, num_classes);
  table.rank = ascending_ranks(table.totoro);
  table.weight = cosine_weights(table.totoro, cfg.w_min, cfg.w_max);
  return table;
}

Vec expand_weights(const NodeWeightTable& table, int n) {
  Vec w = Vec::Ones(n);
  for (std::size_t k = 0; k < table.node_index.size(); ++k)
    w(table.node_index[k]) = table.weight(k);
  return w;
}

}  // namespace rsgslm
