#include "discaug/neural/attention.hpp"

#include <limits>

namespace discaug::neural {

AttentionParams::AttentionParams(const std::string& prefix, Eigen::Index input_dim, Eigen::Index attn_dim,
                                 AttentionScore s)
    : W_h(prefix + ".W_h", attn_dim, input_dim),
      W_v(prefix + ".W_v", attn_dim, attn_dim),
      b(prefix + ".b", attn_dim, 1),
      v(prefix + ".v", attn_dim, 1),
      score(s) {}

void AttentionParams::init(Rng& rng, double w_scale, double v_scale) {
  init_uniform(W_h, w_scale, rng);
  init_uniform(W_v, w_scale, rng);
  b.value.setZero();
  init_uniform(v, v_scale, rng);
}

void AttentionParams::zero_grad() {
  W_h.zero_grad();
  W_v.zero_grad();
  b.zero_grad();
  v.zero_grad();
}

AttentionOutput attention(const Matrix& h, const AttentionParams& p, const PadMask& mask) {
  const Eigen::Index T = h.cols();
  if (T < 1) throw ShapeError("attention: empty sequence");
  require_rows(h.rows(), p.input_dim(), "attention input");
  if (!mask.empty() && static_cast<Eigen::Index>(mask.size()) != T) throw ShapeError("attention: mask length");
  if (count_unmasked(mask, T) == 0) throw ShapeError("attention: every position is masked");

  AttentionOutput out;
  Vector shift = p.b.value;
  if (p.score == AttentionScore::OnesSum) shift += p.W_v.value * p.v.value;
  Matrix pre = p.W_h.value * h;
  pre.colwise() += shift;
  out.align = pre.array().tanh().matrix();

  out.scores = p.score == AttentionScore::OnesSum ? Vector(out.align.colwise().sum().transpose())
                                                   : Vector(out.align.transpose() * p.v.value);
  double max_score = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < T; ++i) {
    if (!is_masked(mask, i)) max_score = std::max(max_score, out.scores(i));
  }
  out.weights = Vector::Zero(T);
  double total = 0.0;
  for (Eigen::Index i = 0; i < T; ++i) {
    if (is_masked(mask, i)) continue;
    out.weights(i) = std::exp(out.scores(i) - max_score);
    total += out.weights(i);
  }
  out.weights /= total;
  out.context = h * out.weights;
  return out;
}

Matrix attention_backward(const AttentionOutput& out, const Matrix& h, const PadMask& mask,
                          const Vector& d_context, AttentionParams& p) {
  const Eigen::Index T = h.cols();
  require_rows(d_context.rows(), h.rows(), "attention context gradient");
  Matrix dh = d_context * out.weights.transpose();

  // Softmax backward: de_i = a_i (da_i - sum_j a_j da_j), da_i = dc . h_i.
  const Vector d_alpha = h.transpose() * d_context;
  const double mean = out.weights.dot(d_alpha);
  Vector d_score = Vector::Zero(T);
  for (Eigen::Index i = 0; i < T; ++i) {
    if (!is_masked(mask, i)) d_score(i) = out.weights(i) * (d_alpha(i) - mean);
  }

  Matrix d_align(out.align.rows(), T);
  if (p.score == AttentionScore::OnesSum) {
    d_align = Vector::Ones(out.align.rows()) * d_score.transpose();
  } else {
    d_align = p.v.value * d_score.transpose();
    p.v.grad += out.align * d_score;
  }
  const Matrix d_pre = d_align.cwiseProduct((1.0 - out.align.array().square()).matrix());
  p.W_h.grad.noalias() += d_pre * h.transpose();
  dh.noalias() += p.W_h.value.transpose() * d_pre;
  const Vector d_shift = d_pre.rowwise().sum();
  p.b.grad += d_shift;
  if (p.score == AttentionScore::OnesSum) {
    p.W_v.grad.noalias() += d_shift * p.v.value.transpose();
    p.v.grad.noalias() += p.W_v.value.transpose() * d_shift;
  }
  return dh;
}

}  // namespace discaug::neural
