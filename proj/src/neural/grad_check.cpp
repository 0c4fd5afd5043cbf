#include "discaug/neural/grad_check.hpp"

#include <cmath>

namespace discaug::neural {

GradCheckReport grad_check(const GradCheckTarget& target, double delta,
                           const std::function<void(std::vector<Param*>&)>& tamper) {
  target.compute_gradients();
  std::vector<Param*> params = target.params;
  if (tamper) tamper(params);

  GradCheckReport report;
  for (Param* p : params) {
    for (Eigen::Index i = 0; i < p->value.size(); ++i) {
      double& w = p->value.data()[i];
      const double saved = w;
      w = saved + delta;
      const double up = target.loss();
      w = saved - delta;
      const double down = target.loss();
      w = saved;
      const double numeric = (up - down) / (2.0 * delta);
      const double analytic = p->grad.data()[i];
      const double rel = std::abs(analytic - numeric) / std::max(1e-8, std::abs(analytic) + std::abs(numeric));
      ++report.components;
      if (rel > report.max_relative_error || !std::isfinite(rel)) {
        report.max_relative_error = std::isfinite(rel) ? rel : HUGE_VAL;
        report.worst_param = p->name;
        report.worst_index = i;
        report.analytic = analytic;
        report.numeric = numeric;
      }
    }
  }
  return report;
}

}  // namespace discaug::neural
