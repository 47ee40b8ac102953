#pragma once

#include <cstdint>
#include <random>

#include "curvefit/normal.hpp"

namespace curvefit {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seeded generator with a fully specified output mapping. std::mt19937_64 is
// bit-exact across standard libraries; the distribution helpers below avoid
// std::uniform_real_distribution and friends, which are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : Rng(seed, 0) {}

  // Stream `stream` of the generator family rooted at `seed`. Two streams of
  // the same seed are decorrelated; the mapping depends on nothing else.
  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t state = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    const std::uint64_t s0 = splitmix64_next(state);
    const std::uint64_t s1 = splitmix64_next(state);
    engine_.seed(s0 ^ (s1 << 1));
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n), unbiased via rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t scaling = UINT64_MAX / n;
    const std::uint64_t limit = scaling * n;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r / scaling;
  }

  // Standard normal by inverse-CDF sampling; u is strictly inside (0, 1).
  double normal() {
    const double u =
        (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    return normal_quantile(u);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace curvefit
