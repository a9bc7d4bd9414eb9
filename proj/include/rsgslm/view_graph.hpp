#pragma once

#include <utility>
#include <vector>

#include "rsgslm/common.hpp"
#include "rsgslm/config.hpp"

namespace rsgslm {

// Output of the per-view alternating solver: a learned row-stochastic
// zero-diagonal graph S, soft labels F, and the ridge projection (Q, b)
// mapping features to label space.
struct ViewGraphResult {
  Mat S;  // n x n
  Mat F;  // n x c
  Mat Q;  // d x c
  Vec b;  // c
  std::vector<double> surrogate_objective_trace;  // one value per outer iteration
};

// Pairwise squared Euclidean distances between rows, zero diagonal.
Mat pairwise_sq_dists(const Mat& x);

// Row-wise simplex step: row i of the result is the projection of
// -p_i / (2 gamma) onto the simplex over the off-diagonal entries, where
// p_ij = 0.5 ||x_i - x_j||^2 + (eta/2) ||f_i - f_j||^2. Diagonal is 0.
Mat step_graph(const Mat& x, const Mat& f, const SolverConfig& cfg);

// Exact minimizer of mu ||Q||^2 + mu alpha ||XQ + 1 b^T - F||^2 via column
// centering and a ridge solve.
std::pair<Mat, Vec> step_projection(const Mat& x, const Mat& f, const SolverConfig& cfg);

// Solves (eta L + U + mu alpha I) F = U Y + mu alpha (XQ + 1 b^T) where L is
// the combinatorial Laplacian of the symmetrized S and U = diag(u). SPD for
// mu alpha > 0.
Mat step_labels(const Mat& x, const Mat& s, const Mat& q, const Vec& b, const Mat& y,
                const Vec& u, const SolverConfig& cfg);

// The alternating objective the three steps jointly decrease:
// sum_ij S_ij (0.5||x_i-x_j||^2 + eta/2 ||f_i-f_j||^2) + Tr((F-Y)^T U (F-Y))
// + gamma ||S||^2 + mu (||Q||^2 + alpha ||XQ + 1b^T - F||^2).
double surrogate_objective(const Mat& x, const Mat& s, const Mat& f, const Mat& q,
                           const Vec& b, const Mat& y, const Vec& u,
                           const SolverConfig& cfg);

// Alternating minimization: F initialized to Y on labeled rows, zero
// elsewhere; repeat [graph step -> projection step -> label step] for
// cfg.outer_iters or until the relative objective decrease drops below
// cfg.rel_tol.
ViewGraphResult solve_view_graph(const Mat& x, const std::vector<int>& labels,
                                 const Mask& train_mask, int num_classes,
                                 const SolverConfig& cfg);

}  // namespace rsgslm
