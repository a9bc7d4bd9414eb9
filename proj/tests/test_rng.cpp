#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rsgslm/rng.hpp"

using namespace rsgslm;

TEST_CASE("same seed reproduces the same stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 200; ++i) CHECK(a.uniform() == b.uniform());
  Rng c(42), d(43);
  bool any_diff = false;
  for (int i = 0; i < 20; ++i) any_diff |= (c.uniform() != d.uniform());
  CHECK(any_diff);
}

TEST_CASE("uniform stays in [0, 1)") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal has roughly standard moments") {
  Rng rng(11);
  const int n = 20000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 0.05);
  CHECK(std::abs(var - 1.0) < 0.1);
}

TEST_CASE("below is bounded and shuffle permutes") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) CHECK(rng.below(17) < 17);

  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  rng.shuffle(v);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("glorot entries respect the fan bound") {
  Rng rng(5);
  const int fi = 9, fo = 4;
  const Mat w = rng.glorot(fi, fo);
  const double limit = std::sqrt(6.0 / (fi + fo));
  CHECK(w.rows() == fi);
  CHECK(w.cols() == fo);
  CHECK(w.maxCoeff() <= limit);
  CHECK(w.minCoeff() >= -limit);
  CHECK(w.cwiseAbs().maxCoeff() > 0.0);
}
