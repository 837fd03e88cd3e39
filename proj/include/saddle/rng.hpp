#pragma once

#include <cstdint>
#include <random>

namespace saddle {

/// Seeded generator with a fixed uniform mapping. std::uniform_real_distribution
/// is implementation-defined, so draws go through an explicit 53-bit ladder to
/// keep outputs bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform double in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace saddle
