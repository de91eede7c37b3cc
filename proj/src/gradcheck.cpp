#include "dgt/gradcheck.hpp"

#include <cmath>

namespace dgt {

GradCheckReport finite_diff_compare(const std::vector<std::pair<std::string, TensorPtr>>& params,
                                    const std::function<double()>& loss, double epsilon) {
  if (epsilon < 1e-7 || epsilon > 1e-4)
    throw ValidationError("finite_diff: epsilon must lie in [1e-7, 1e-4]");

  double base1 = loss();
  double base2 = loss();
  if (base1 != base2) throw NumericError("finite_diff: loss closure is not deterministic");

  GradCheckReport report;
  for (const auto& [name, p] : params) {
    if (!p->requires_grad) continue;
    GradCheckEntry entry;
    entry.name = name;
    for (size_t i = 0; i < p->data.size(); ++i) {
      double saved = p->data[i];
      p->data[i] = saved + epsilon;
      double up = loss();
      p->data[i] = saved - epsilon;
      double down = loss();
      p->data[i] = saved;
      double numeric = (up - down) / (2.0 * epsilon);
      double analytic = p->grad[i];
      double denom = std::max({std::fabs(analytic), std::fabs(numeric), 1e-8});
      double rel = std::fabs(analytic - numeric) / denom;
      if (rel >= entry.max_rel_err) {
        entry.max_rel_err = rel;
        entry.worst_index = static_cast<int64_t>(i);
        entry.analytic = analytic;
        entry.numeric = numeric;
      }
      ++entry.count;
    }
    report.max_rel_err = std::max(report.max_rel_err, entry.max_rel_err);
    report.groups.push_back(std::move(entry));
  }
  return report;
}

GradCheckReport finite_diff_check(const std::vector<std::pair<std::string, TensorPtr>>& params,
                                  const std::function<double()>& loss,
                                  const std::function<void()>& analytic_backward, double epsilon) {
  for (const auto& [name, p] : params) p->zero_grad();
  analytic_backward();
  return finite_diff_compare(params, loss, epsilon);
}

}  // namespace dgt
