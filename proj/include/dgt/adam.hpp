#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "dgt/tensor.hpp"

namespace dgt {

// Adam with bias correction. Only the learning rate is externally prescribed
// (2e-4 default); beta/eps are the usual values.
struct AdamConfig {
  double lr = 2e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamSlot {
  std::vector<double> m, v;
};

class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

  // One update over the given parameters, reading each tensor's grad buffer.
  // Refuses to update on non-finite gradients.
  void step(const std::vector<std::pair<std::string, TensorPtr>>& params);

  int64_t steps() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  int64_t t_ = 0;
  std::unordered_map<const Tensor*, AdamSlot> slots_;
};

}  // namespace dgt
