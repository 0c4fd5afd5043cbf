#pragma once

#include <string>
#include <vector>

#include "discaug/neural/param.hpp"

namespace discaug::neural {

/// How a d_a-dimensional alignment vector u_i is reduced to a scalar score.
enum class AttentionScore : int {
  /// u_i = tanh(W_h h_i + W_v v + b), e_i = sum_k u_ik
  OnesSum = 0,
  /// u_i = tanh(W_h h_i + b), e_i = v . u_i   (W_v unused)
  ContextDot = 1,
};

struct AttentionParams {
  Param W_h;  // d_a x 2H
  Param W_v;  // d_a x d_a
  Param b;    // d_a x 1
  Param v;    // d_a x 1, trainable context vector
  AttentionScore score = AttentionScore::OnesSum;

  AttentionParams() = default;
  AttentionParams(const std::string& prefix, Eigen::Index input_dim, Eigen::Index attn_dim,
                  AttentionScore score = AttentionScore::OnesSum);

  Eigen::Index attn_dim() const noexcept { return W_h.value.rows(); }
  Eigen::Index input_dim() const noexcept { return W_h.value.cols(); }

  /// Matrices uniform(-w_scale, w_scale), b zero, v uniform(-v_scale, v_scale).
  void init(Rng& rng, double w_scale = 0.08, double v_scale = 0.1);
  std::vector<Param*> params() { return {&W_h, &W_v, &b, &v}; }
  void zero_grad();
};

struct AttentionOutput {
  Vector context;  // weighted sum of hidden states
  Vector weights;  // alpha, exactly 0 at padding
  Vector scores;   // e_i (unnormalized; meaningless at padding)
  Matrix align;    // u, d_a x T
};

/// h is 2H x T. Throws ShapeError when every position is masked.
AttentionOutput attention(const Matrix& h, const AttentionParams& p, const PadMask& mask = {});

/// Returns dL/dh and accumulates parameter gradients.
Matrix attention_backward(const AttentionOutput& out, const Matrix& h, const PadMask& mask,
                          const Vector& d_context, AttentionParams& p);

}  // namespace discaug::neural
