#include "dgt/adam.hpp"

#include <cmath>

namespace dgt {

void Adam::step(const std::vector<std::pair<std::string, TensorPtr>>& params) {
  for (const auto& [name, p] : params) {
    if (!p->requires_grad) continue;
    for (double g : p->grad)
      if (!std::isfinite(g)) throw NumericError("adam: non-finite gradient in " + name);
  }

  t_ += 1;
  double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));

  for (const auto& [name, p] : params) {
    if (!p->requires_grad) continue;
    AdamSlot& slot = slots_[p.get()];
    if (slot.m.empty()) {
      slot.m.assign(p->data.size(), 0.0);
      slot.v.assign(p->data.size(), 0.0);
    }
    for (size_t i = 0; i < p->data.size(); ++i) {
      double g = p->grad[i];
      slot.m[i] = cfg_.beta1 * slot.m[i] + (1.0 - cfg_.beta1) * g;
      slot.v[i] = cfg_.beta2 * slot.v[i] + (1.0 - cfg_.beta2) * g * g;
      double mhat = slot.m[i] / bc1;
      double vhat = slot.v[i] / bc2;
      p->data[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

}  // namespace dgt
