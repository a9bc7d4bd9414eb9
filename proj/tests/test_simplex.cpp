#include <doctest.h>

#include <cmath>
#include <limits>

#include "rsgslm/rng.hpp"
#include "rsgslm/simplex.hpp"

#include "oracles.hpp"

using namespace rsgslm;

TEST_CASE("points already on the simplex are fixed points") {
  Vec v(2);
  v << 0.5, 0.5;
  const Vec s = simplex_project(v);
  CHECK(s(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("dominant coordinate saturates") {
  Vec v(2);
  v << 10.0, 0.0;
  const Vec s = simplex_project(v);
  CHECK(s(0) == doctest::Approx(1.0));
  CHECK(s(1) == doctest::Approx(0.0));
}

TEST_CASE("symmetric input projects to the uniform vector") {
  Vec v = Vec::Constant(3, 0.2);
  const Vec s = simplex_project(v);
  for (int i = 0; i < 3; ++i) CHECK(s(i) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("non-finite input is rejected") {
  Vec v(3);
  v << 1.0, std::numeric_limits<double>::quiet_NaN(), 0.0;
  CHECK_THROWS_AS(simplex_project(v), NumericError);
  Vec w(1);
  w << std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(simplex_project(w), NumericError);
}

TEST_CASE("empty input is rejected") {
  CHECK_THROWS_AS(simplex_project(Vec()), NumericError);
}

TEST_CASE("random projections match the support-enumeration oracle") {
  Rng rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const int m = 1 + static_cast<int>(rng.below(8));
    Vec v(m);
    for (int i = 0; i < m; ++i) v(i) = 10.0 * (rng.uniform() - 0.3);
    const Vec fast = simplex_project(v);
    const Vec slow = oracle::simplex_project_enumerate(v);

    REQUIRE(fast.size() == m);
    CHECK(fast.minCoeff() >= 0.0);
    CHECK(std::abs(fast.sum() - 1.0) <= 1e-12);
    CHECK((fast - slow).cwiseAbs().maxCoeff() <= 1e-10);
  }
}
