#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace dgt {

// Validation problems (bad shapes, bad config, bad input files). CLI exit code 1.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numeric failures (NaN/Inf intermediates, gradient-check failures). CLI exit code 2.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Dense row-major float64 tensor. Rank 1 or 2 everywhere in this project.
// grad is allocated (zeroed) iff requires_grad is set.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> data;
  bool requires_grad = false;
  std::vector<double> grad;

  Tensor() = default;
  Tensor(std::vector<int> s, std::vector<double> d, bool rg = false)
      : shape(std::move(s)), data(std::move(d)), requires_grad(rg) {
    if (numel() != static_cast<int64_t>(data.size()))
      throw ValidationError("tensor: shape/data size mismatch");
    if (requires_grad) grad.assign(data.size(), 0.0);
  }

  static Tensor zeros(std::vector<int> s, bool rg = false) {
    int64_t n = 1;
    for (int d : s) n *= d;
    return Tensor(std::move(s), std::vector<double>(static_cast<size_t>(n), 0.0), rg);
  }

  static Tensor full(std::vector<int> s, double v, bool rg = false) {
    int64_t n = 1;
    for (int d : s) n *= d;
    return Tensor(std::move(s), std::vector<double>(static_cast<size_t>(n), v), rg);
  }

  static Tensor identity(int n) {
    Tensor t = zeros({n, n});
    for (int i = 0; i < n; ++i) t.data[static_cast<size_t>(i) * n + i] = 1.0;
    return t;
  }

  int64_t numel() const {
    int64_t n = 1;
    for (int d : shape) n *= d;
    return n;
  }

  int ndim() const { return static_cast<int>(shape.size()); }
  int rows() const { return shape.empty() ? 1 : shape[0]; }
  int cols() const { return shape.size() < 2 ? 1 : shape[1]; }

  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols() + c]; }
  double at(int r, int c) const { return data[static_cast<size_t>(r) * cols() + c]; }

  void zero_grad() {
    if (requires_grad) grad.assign(data.size(), 0.0);
  }
};

using TensorPtr = std::shared_ptr<Tensor>;

inline TensorPtr make_tensor(Tensor t) { return std::make_shared<Tensor>(std::move(t)); }

inline std::string shape_str(const std::vector<int>& s) {
  std::string out = "[";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "]";
}

}  // namespace dgt
