#pragma once

#include <cstdint>
#include <random>

#include "varcz/types.hpp"

namespace varcz {

/// Deterministic RNG. std::mt19937_64 has a fixed bit stream, and the
/// conversions below avoid std::*_distribution whose output is
/// implementation-defined; identical seeds give identical results on
/// every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(eng_() % span);
  }

  Complex uniform_complex(double radius = 1.0) {
    return {uniform(-radius, radius), uniform(-radius, radius)};
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace varcz
