#include "discaug/neural/layers.hpp"

#include <cmath>

namespace discaug::neural {

Vector softmax(const Vector& logits) {
  Vector e = (logits.array() - logits.maxCoeff()).exp().matrix();
  return e / e.sum();
}

HeadParams::HeadParams(const std::string& prefix, Eigen::Index input_dim)
    : W_s(prefix + ".W_s", 2, input_dim), b_s(prefix + ".b_s", 2, 1) {}

void HeadParams::init(Rng& rng, double scale) {
  init_uniform(W_s, scale, rng);
  b_s.value.setZero();
}

void HeadParams::zero_grad() {
  W_s.zero_grad();
  b_s.zero_grad();
}

Vector classify_head(const Vector& c, const HeadParams& p) {
  require_rows(c.rows(), p.W_s.value.cols(), "head input");
  require_finite(c, "head input");
  return softmax(p.W_s.value * c + p.b_s.value);
}

Vector classify_head_backward(const Vector& c, const Vector& d_logits, HeadParams& p) {
  p.W_s.grad.noalias() += d_logits * c.transpose();
  p.b_s.grad += d_logits;
  return p.W_s.value.transpose() * d_logits;
}

double cross_entropy(const Vector& y, Label label) {
  return -std::log(std::max(y(static_cast<Eigen::Index>(index_of(label))), kProbabilityClip));
}

Vector cross_entropy_logit_grad(const Vector& y, Label label) {
  const auto l = static_cast<Eigen::Index>(index_of(label));
  if (!(y(l) > kProbabilityClip)) return Vector::Zero(y.size());
  Vector g = y;
  g(l) -= 1.0;
  return g;
}

Vector dropout(const Vector& x, double rate, Rng& rng, bool training, Vector* scale_out) {
  if (!(rate >= 0.0 && rate < 1.0)) throw ShapeError("dropout rate must lie in [0, 1)");
  if (!training || rate == 0.0) {
    if (scale_out) *scale_out = Vector::Ones(x.size());
    return x;
  }
  Vector scale(x.size());
  const double keep = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < x.size(); ++i) scale(i) = rng.bernoulli(rate) ? 0.0 : keep;
  if (scale_out) *scale_out = scale;
  return x.cwiseProduct(scale);
}

}  // namespace discaug::neural
