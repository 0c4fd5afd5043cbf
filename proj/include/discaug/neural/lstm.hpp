#pragma once

#include <string>
#include <vector>

#include "discaug/neural/param.hpp"

namespace discaug::neural {

/// Gate blocks are stacked row-wise in the order forget, input, output, cell:
/// rows [0,H) hold W_f / U_f / b_f, [H,2H) the input gate, and so on.
struct LstmParams {
  Param W;  // 4H x d
  Param U;  // 4H x H
  Param b;  // 4H x 1

  LstmParams() = default;
  LstmParams(const std::string& prefix, Eigen::Index input_dim, Eigen::Index hidden);

  Eigen::Index hidden() const noexcept { return U.value.cols(); }
  Eigen::Index input_dim() const noexcept { return W.value.cols(); }

  /// Weights uniform(-scale, scale), biases zero.
  void init(Rng& rng, double scale = 0.08);
  std::vector<Param*> params() { return {&W, &U, &b}; }
  void zero_grad();
};

enum class Gate : int { Forget = 0, Input = 1, Output = 2, Cell = 3 };

/// Activations of one cell evaluation; kept for the backward pass.
struct LstmStep {
  Vector f, i, o;  // sigmoid gates
  Vector g;        // tanh candidate
  Vector c;        // new cell state
  Vector tanh_c;
  Vector h;        // new hidden state
};

LstmStep lstm_cell(const LstmParams& p, const Vector& x, const Vector& h_prev, const Vector& c_prev);

struct LstmStepGrad {
  Vector dx, dh_prev, dc_prev;
};

/// Accumulates parameter gradients into p and returns input/state gradients.
/// dh and dc are the loss gradients w.r.t. the step's h and c outputs.
LstmStepGrad lstm_cell_backward(LstmParams& p, const LstmStep& step, const Vector& x, const Vector& h_prev,
                                const Vector& c_prev, const Vector& dh, const Vector& dc);

struct BiLstmOutput {
  Matrix states;                       // 2H x T, [forward; backward], zero at padding
  std::vector<Eigen::Index> positions; // unmasked positions in order
  Matrix inputs;                       // d x n, compacted unmasked inputs
  std::vector<LstmStep> fwd, bwd;      // per compacted position
};

/// x is d x T (one column per token). Padding positions are skipped by both
/// directions and produce zero states.
BiLstmOutput bilstm_encode(const Matrix& x, const LstmParams& fwd, const LstmParams& bwd,
                           const PadMask& mask = {});

/// Returns dL/dx (d x T) and accumulates gradients into fwd and bwd.
Matrix bilstm_backward(const BiLstmOutput& out, const Matrix& d_states, LstmParams& fwd, LstmParams& bwd);

}  // namespace discaug::neural
