#pragma once

#include <cstdint>
#include <vector>

#include "rsgslm/common.hpp"
#include "rsgslm/fusion.hpp"

namespace rsgslm {

// Two-layer graph convolution: Z = softmax(A (relu(A X W0)) W1), no biases,
// no dropout, all in double precision so finite-difference checks are sharp.
struct GcnParams {
  Mat W0;  // in_dim x hidden_dim
  Mat W1;  // hidden_dim x out_dim
};

// Everything the backward pass needs from one forward evaluation.
struct GcnForwardTrace {
  Mat P0;      // A X
  Mat H1_pre;  // P0 W0
  Mat H1;      // relu(H1_pre)
  Mat P1;      // A H1
  Mat Z_pre;   // P1 W1 (logits)
  Mat Z;       // row softmax of Z_pre
};

struct GcnGrads {
  Mat dW0;
  Mat dW1;
};

// Column-wise concatenation [F^1 | ... | F^V]; all matrices share rows.
Mat concat_features(const std::vector<Mat>& fs);

// A_hat with optional self-loops: (A_sym + I) renormalized by its own degrees.
Mat propagation_operator(const FusedGraph& fused, bool add_self_loops);

// Glorot-uniform, deterministic per seed; the two layers consume the stream
// in order, so any dimension change reshuffles everything after it.
GcnParams init_params(std::uint64_t seed, int in_dim, int hidden_dim, int out_dim);

GcnForwardTrace gcn_forward(const GcnParams& params, const Mat& op, const Mat& features);

// Reverse-mode gradients of a scalar loss given dLoss/dZ.
GcnGrads gcn_backward(const GcnParams& params, const Mat& op, const GcnForwardTrace& trace,
                      const Mat& grad_z);

Mat softmax_rows(const Mat& logits);

}  // namespace rsgslm
