#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace hnet {

// Seeded RNG used everywhere randomness is needed. Only raw mt19937_64
// output is consumed (no std distributions), so streams are identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // [0, 1) with 53 bits of mantissa.
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  // Independent stream for a sub-task.
  std::uint64_t fork_seed() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace hnet
