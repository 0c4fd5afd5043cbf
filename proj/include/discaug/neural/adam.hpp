#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "discaug/neural/param.hpp"

namespace discaug::neural {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Moment estimates mirror the parameter list passed to adam_step; they are
/// shaped lazily on the first step.
struct AdamState {
  std::vector<Matrix> m;
  std::vector<Matrix> v;
  std::int64_t t = 0;
};

/// One bias-corrected Adam update from each Param's accumulated grad.
/// Throws NonFiniteError (leaving params and state untouched) on a NaN/inf gradient.
void adam_step(std::span<Param* const> params, AdamState& state, const AdamConfig& cfg = {});

/// Global L2 norm over all gradients.
double grad_norm(std::span<Param* const> params);

/// Scales every gradient so the global norm is at most max_norm. Returns the pre-clip norm.
double clip_grad_norm(std::span<Param* const> params, double max_norm);

}  // namespace discaug::neural
