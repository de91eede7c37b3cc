#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace dgt {

// mt19937_64 with hand-rolled mappings. The engine output is pinned by the
// standard; std::*_distribution is not, so we avoid it to keep corpora and
// parameter initializations reproducible across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n), n >= 1; rejection-free modulo is fine at desk scale
  // but use Lemire-style rejection to stay unbiased.
  uint64_t below(uint64_t n) {
    uint64_t x, r;
    do {
      x = eng_();
      r = x % n;
    } while (x - r > UINT64_MAX - (n - 1));
    return r;
  }

  int index(size_t n) { return static_cast<int>(below(static_cast<uint64_t>(n))); }

  bool chance(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace dgt
