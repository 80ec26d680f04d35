#pragma once

#include <cstdint>
#include <vector>

namespace mfnipr {

// Deterministic splitmix64 generator; used instead of <random> distributions
// so identical seeds give identical instances on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Inclusive range, rejection-sampled to stay unbiased.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do { v = next(); } while (v >= limit);
    return lo + static_cast<int>(v % span);
  }

  // Value on the grid {lo, lo+step, ..., hi}; keeps decimals exact.
  double uniform_grid(double lo, double hi, double step) {
    const int ticks = static_cast<int>((hi - lo) / step + 0.5);
    return lo + step * uniform_int(0, ticks);
  }

  bool chance(double p) { return next() < static_cast<std::uint64_t>(p * 18446744073709551615.0); }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[uniform_int(0, static_cast<int>(i) - 1)]);
  }

 private:
  std::uint64_t state_;
};

}  // namespace mfnipr
