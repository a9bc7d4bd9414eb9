#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rsgslm/fusion.hpp"
#include "rsgslm/renode.hpp"
#include "rsgslm/rng.hpp"

#include "oracles.hpp"

using namespace rsgslm;

namespace {

// Symmetric normalized adjacency of a random connected-ish graph.
Mat random_a_hat(Rng& rng, int n) {
  Mat s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = (i == j) ? 0.0 : rng.uniform();
  return normalized_operators(s).A_hat;
}

}  // namespace

TEST_CASE("single self-connected node keeps all influence") {
  Mat a(1, 1);
  a << 1.0;
  const Mat p = personalized_pagerank(a, 0.15);
  CHECK(p(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two-node chain matches the closed form") {
  Mat a(2, 2);
  a << 0, 1, 1, 0;
  const Mat p = personalized_pagerank(a, 0.15);
  CHECK(p(0, 0) == doctest::Approx(0.5405).epsilon(5e-5));
  CHECK(p(0, 1) == doctest::Approx(0.4595).epsilon(5e-5));
  CHECK(p(1, 0) == doctest::Approx(0.4595).epsilon(5e-5));
  CHECK(p(1, 1) == doctest::Approx(0.5405).epsilon(5e-5));
}

TEST_CASE("dense solve agrees with the truncated power series") {
  Rng rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(18));
    const Mat a = random_a_hat(rng, n);
    const double xi = 0.05 + 0.5 * rng.uniform();
    const Mat p = personalized_pagerank(a, xi);
    const Mat series = oracle::ppr_neumann(a, xi, 200);
    CHECK((p - series).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("influence matrix is symmetric positive definite with bounded spectrum") {
  // For xi (I - (1-xi) A)^{-1} with symmetric A whose spectrum lies in
  // [-1, 1], every eigenvalue lands in [xi/(2-xi), 1].
  Rng rng(32);
  const double xi = 0.15;
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(15));
    const Mat a = random_a_hat(rng, n);
    const Mat p = personalized_pagerank(a, xi);
    CHECK((p - p.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(p.minCoeff() >= -1e-12);  // Neumann series of a nonnegative matrix
    const Eigen::SelfAdjointEigenSolver<Mat> eig(p);
    CHECK(eig.eigenvalues().minCoeff() >= xi / (2.0 - xi) - 1e-9);
    CHECK(eig.eigenvalues().maxCoeff() <= 1.0 + 1e-9);
  }
}

TEST_CASE("restart probability outside (0, 1] is rejected") {
  Mat a = Mat::Zero(2, 2);
  CHECK_THROWS_AS(personalized_pagerank(a, 0.0), UsageError);
  CHECK_THROWS_AS(personalized_pagerank(a, 1.5), UsageError);
}

TEST_CASE("single class produces zero conflict scores") {
  Rng rng(33);
  const int n = 8;
  const Mat p = personalized_pagerank(random_a_hat(rng, n), 0.15);
  std::vector<int> labels(n, 0);
  Mask train(n, 0);
  train[0] = train[3] = 1;
  const Vec t = totoro_scores(p, labels, train, 1);
  CHECK(t.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix-form conflict scores equal the literal triple sum") {
  Rng rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 6 + static_cast<int>(rng.below(25));
    const int c = 2 + static_cast<int>(rng.below(3));
    const Mat p = personalized_pagerank(random_a_hat(rng, n), 0.15);
    std::vector<int> labels(n);
    Mask train(n, 0);
    for (int i = 0; i < n; ++i) labels[i] = i % c;
    for (int i = 0; i < c; ++i) train[i] = 1;
    for (int i = c; i < n; ++i)
      if (rng.uniform() < 0.5) train[i] = 1;
    const Vec fast = totoro_scores(p, labels, train, c);
    const Vec slow = oracle::totoro_triple_sum(p, labels, train, c);
    REQUIRE(fast.size() == slow.size());
    CHECK((fast - slow).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("disconnected per-class cliques have zero conflict") {
  Mat s = Mat::Zero(6, 6);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) {
        s(i, j) = 0.5;
        s(i + 3, j + 3) = 0.5;
      }
  const Mat a_hat = normalized_operators(s).A_hat;
  const Mat p = personalized_pagerank(a_hat, 0.15);
  std::vector<int> labels = {0, 0, 0, 1, 1, 1};
  Mask train = {1, 0, 0, 1, 0, 0};
  const Vec t = totoro_scores(p, labels, train, 2);
  CHECK(t.cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("a class with no anchors is rejected") {
  Rng rng(35);
  const Mat p = personalized_pagerank(random_a_hat(rng, 5), 0.15);
  std::vector<int> labels = {0, 0, 1, 1, 1};
  Mask train = {1, 1, 0, 0, 0};  // class 1 unanchored
  CHECK_THROWS_AS(totoro_scores(p, labels, train, 2), DataError);
}

TEST_CASE("two scores map to the endpoints (w_max, midpoint)") {
  Vec t(2);
  t << 0.3, 0.9;
  const Vec w = cosine_weights(t, 0.5, 0.9);
  CHECK(w(0) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(w(1) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("zero weight range disables re-weighting") {
  Vec t(5);
  t << 3, 1, 4, 1, 5;
  const Vec w = cosine_weights(t, 0.8, 0.8);
  for (int i = 0; i < 5; ++i) CHECK(w(i) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("exact ties rank by position") {
  Vec t = Vec::Zero(4);
  const std::vector<int> ranks = ascending_ranks(t);
  CHECK(ranks == std::vector<int>{0, 1, 2, 3});
  const Vec w = cosine_weights(t, 0.5, 1.5);
  for (int i = 1; i < 4; ++i) CHECK(w(i) <= w(i - 1));
}

TEST_CASE("weights are bounded and non-increasing in rank") {
  Rng rng(36);
  const int m = 17;
  Vec t(m);
  for (int i = 0; i < m; ++i) t(i) = rng.normal();
  const double w_min = 0.5, w_max = 1.5;
  const Vec w = cosine_weights(t, w_min, w_max);
  const std::vector<int> ranks = ascending_ranks(t);
  CHECK(w.minCoeff() >= w_min);
  CHECK(w.maxCoeff() <= w_max);
  // sorted by rank, weights must be non-increasing
  std::vector<double> by_rank(m);
  for (int i = 0; i < m; ++i) by_rank[ranks[i]] = w(i);
  for (int r = 1; r < m; ++r) CHECK(by_rank[r] <= by_rank[r - 1] + 1e-15);
  // the most central node gets exactly w_max
  CHECK(by_rank[0] == doctest::Approx(w_max).epsilon(1e-12));
}

TEST_CASE("permutation equivariance on distinct scores") {
  Rng rng(37);
  const int m = 9;
  Vec t(m);
  for (int i = 0; i < m; ++i) t(i) = i * 0.37 + 0.01 * rng.uniform();
  const Vec w = cosine_weights(t, 0.6, 1.2);
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  rng.shuffle(perm);
  Vec tp(m);
  for (int i = 0; i < m; ++i) tp(i) = t(perm[i]);
  const Vec wp = cosine_weights(tp, 0.6, 1.2);
  for (int i = 0; i < m; ++i) CHECK(wp(i) == doctest::Approx(w(perm[i])).epsilon(1e-12));
}

TEST_CASE("full pass produces a table aligned with labeled nodes") {
  Rng rng(38);
  const int n = 12, c = 3;
  const Mat a_hat = random_a_hat(rng, n);
  std::vector<int> labels(n);
  Mask train(n, 0);
  for (int i = 0; i < n; ++i) labels[i] = i % c;
  for (int i = 0; i < 6; ++i) train[i] = 1;
  ReNodeConfig cfg;
  cfg.w_min = 0.9;
  cfg.w_max = 1.1;
  const NodeWeightTable table = compute_node_weights(a_hat, labels, train, c, cfg);
  REQUIRE(table.node_index.size() == 6);
  CHECK(table.node_index == std::vector<int>{0, 1, 2, 3, 4, 5});
  CHECK(table.weight.minCoeff() >= 0.9);
  CHECK(table.weight.maxCoeff() <= 1.1);
  std::vector<int> sorted_ranks = table.rank;
  std::sort(sorted_ranks.begin(), sorted_ranks.end());
  for (int r = 0; r < 6; ++r) CHECK(sorted_ranks[r] == r);

  const Vec full = expand_weights(table, n);
  REQUIRE(full.size() == n);
  for (int i = 6; i < n; ++i) CHECK(full(i) == 1.0);
  for (int i = 0; i < 6; ++i) CHECK(full(i) == table.weight(i));
}
