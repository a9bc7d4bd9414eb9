#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rsgslm/common.hpp"

namespace rsgslm {

// Deterministic random source. std::mt19937_64 has a pinned algorithm, but the
// std distributions do not, so the mapping from raw draws to doubles lives here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; draws two uniforms per pair of outputs.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection-free modulo is biased for huge n; all uses here have n << 2^32.
    return engine_() % n;
  }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  Mat normal_matrix(int rows, int cols) {
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = normal();
    return m;
  }

  // Glorot/Xavier uniform init, the customary GCN layer initialization.
  Mat glorot(int fan_in, int fan_out) {
    double limit = std::sqrt(6.0 / (fan_in + fan_out));
    Mat m(fan_in, fan_out);
    for (int i = 0; i < fan_in; ++i)
      for (int j = 0; j < fan_out; ++j) m(i, j) = (2.0 * uniform() - 1.0) * limit;
    return m;
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rsgslm
