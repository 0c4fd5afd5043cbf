#include "discaug/neural/adam.hpp"

#include <cmath>

namespace discaug::neural {

void adam_step(std::span<Param* const> params, AdamState& state, const AdamConfig& cfg) {
  for (const Param* p : params) {
    if (!p->grad.allFinite()) throw NonFiniteError("non-finite gradient for " + p->name);
  }
  if (state.m.empty()) {
    for (const Param* p : params) {
      state.m.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
      state.v.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    }
  }
  if (state.m.size() != params.size()) throw ShapeError("adam_step: parameter list changed between steps");

  state.t += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Param& p = *params[k];
    auto m = state.m[k].array();
    auto v = state.v[k].array();
    const auto g = p.grad.array();
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.square();
    p.value.array() -= cfg.lr * (m / bc1) / ((v / bc2).sqrt() + cfg.eps);
  }
}

double grad_norm(std::span<Param* const> params) {
  double sq = 0.0;
  for (const Param* p : params) sq += p->grad.squaredNorm();
  return std::sqrt(sq);
}

double clip_grad_norm(std::span<Param* const> params, double max_norm) {
  const double norm = grad_norm(params);
  if (norm > max_norm) {
    const double s = max_norm / norm;
    for (Param* p : params) p->grad *= s;
  }
  return norm;
}

}  // namespace discaug::neural
