#pragma once

#include <string>
#include <vector>

#include "discaug/corpus.hpp"
#include "discaug/neural/param.hpp"

namespace discaug::neural {

/// Numerically stable softmax (max-shifted).
Vector softmax(const Vector& logits);

/// Output projection onto the two sentiment classes.
struct HeadParams {
  Param W_s;  // 2 x in
  Param b_s;  // 2 x 1

  HeadParams() = default;
  HeadParams(const std::string& prefix, Eigen::Index input_dim);

  void init(Rng& rng, double scale = 0.08);
  std::vector<Param*> params() { return {&W_s, &b_s}; }
  void zero_grad();
};

/// softmax(W_s c + b_s)
Vector classify_head(const Vector& c, const HeadParams& p);

/// Given dL/dlogits, accumulates head gradients and returns dL/dc.
Vector classify_head_backward(const Vector& c, const Vector& d_logits, HeadParams& p);

inline constexpr double kProbabilityClip = 1e-12;

/// -log(max(y[label], 1e-12))
double cross_entropy(const Vector& y, Label label);

/// Gradient of cross_entropy(softmax(z), label) w.r.t. the logits z:
/// y - onehot(label), or zero while the clip is engaged.
Vector cross_entropy_logit_grad(const Vector& y, Label label);

/// Inverted dropout. In training mode each component is zeroed with
/// probability `rate` and survivors are scaled by 1/(1-rate); `scale_out`
/// receives the per-component multiplier for the backward pass. Identity
/// (scale 1) when training is false or rate is 0.
Vector dropout(const Vector& x, double rate, Rng& rng, bool training, Vector* scale_out = nullptr);

}  // namespace discaug::neural
