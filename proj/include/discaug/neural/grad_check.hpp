#pragma once

#include <functional>
#include <string>
#include <vector>

#include "discaug/neural/param.hpp"

namespace discaug::neural {

/// A differentiable scalar function of a parameter list.
struct GradCheckTarget {
  std::vector<Param*> params;
  /// Forward pass only; must be deterministic (no dropout).
  std::function<double()> loss;
  /// Zeroes and then fills Param::grad with the analytic gradient.
  std::function<void()> compute_gradients;
};

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::string worst_param;
  Eigen::Index worst_index = -1;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t components = 0;
};

/// Compares every analytic gradient component against the central difference
/// (L(w+delta) - L(w-delta)) / 2 delta using |a-n| / max(1e-8, |a|+|n|).
/// `tamper`, when set, may modify the analytic gradients before comparison
/// (fault injection).
GradCheckReport grad_check(const GradCheckTarget& target, double delta = 1e-5,
                           const std::function<void(std::vector<Param*>&)>& tamper = {});

}  // namespace discaug::neural
