#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsgslm {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Mask = std::vector<std::uint8_t>;

// Floor added inside logarithms and divisions by probabilities.
inline constexpr double kProbEps = 1e-12;

// Process exit codes shared by the CLI and the error hierarchy.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNumeric = 3,
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline int mask_count(const Mask& m) {
  int k = 0;
  for (auto v : m) k += v ? 1 : 0;
  return k;
}

inline std::vector<int> mask_indices(const Mask& m) {
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(m.size()); ++i)
    if (m[i]) idx.push_back(i);
  return idx;
}

}  // namespace rsgslm
