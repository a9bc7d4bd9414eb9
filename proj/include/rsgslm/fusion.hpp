#pragma once

#include <vector>

#include "rsgslm/common.hpp"

namespace rsgslm {

// Symmetric operators derived from a nonnegative (possibly asymmetric) graph:
// A_sym = (S + S^T)/2, degrees d = row sums of A_sym,
// A_hat = D^{-1/2} A_sym D^{-1/2}, L_norm = I - A_hat.
// Isolated nodes (zero degree) get zero rows/columns in A_hat and in L_norm,
// keeping both operators finite and L_norm positive semidefinite.
struct NormalizedOps {
  Mat A_sym;
  Mat A_hat;
  Mat L_norm;
  Vec degrees;
};

NormalizedOps normalized_operators(const Mat& s);

// Weighted average of the per-view graphs plus its derived operators.
struct FusedGraph {
  Mat S;       // row-stochastic fused graph
  Vec alphas;  // per-view weights actually used
  Mat A_sym;
  Mat A_hat;
  Mat L_norm;
};

// sqrt(Tr(X^T L_norm X)) for the view's own graph; views whose features vary
// little across strong edges (smooth views) score lower. A floor of 1e-6
// replaces exact zeros so downstream convex combinations stay well defined.
double view_weight(const Mat& x, const Mat& s);

FusedGraph fuse(const std::vector<Mat>& view_graphs, const Vec& alphas);

}  // namespace rsgslm
