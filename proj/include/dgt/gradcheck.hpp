#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dgt/tensor.hpp"

namespace dgt {

struct GradCheckEntry {
  std::string name;
  int64_t count = 0;       // scalars checked
  double max_rel_err = 0;  // worst relative error in this group
  int64_t worst_index = -1;
  double analytic = 0, numeric = 0;  // at the worst index
};

struct GradCheckReport {
  std::vector<GradCheckEntry> groups;
  double max_rel_err = 0;
  bool pass(double tol) const { return max_rel_err < tol; }
};

// Central differences against the grad buffers already present on the
// parameters. rel_err = |a - n| / max(|a|, |n|, 1e-8). The loss closure must
// be deterministic; two baseline evaluations are compared to enforce that.
GradCheckReport finite_diff_compare(const std::vector<std::pair<std::string, TensorPtr>>& params,
                                    const std::function<double()>& loss, double epsilon);

// Full check: zero grads, run the analytic pass (closure must fill grads via
// backward), then compare against central differences.
GradCheckReport finite_diff_check(const std::vector<std::pair<std::string, TensorPtr>>& params,
                                  const std::function<double()>& loss,
                                  const std::function<void()>& analytic_backward, double epsilon);

}  // namespace dgt
