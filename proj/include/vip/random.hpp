#pragma once

#include <cstdint>
#include <random>

#include "vip/core.hpp"

namespace vip {

/// Deterministic source of uniform doubles and vectors. Built on mt19937_64
/// with an explicit bits-to-double conversion so that streams are identical
/// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Coordinates uniform in [-scale, scale).
  Vector vector(Eigen::Index dim, double scale = 1.0) {
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = uniform(-scale, scale);
    return v;
  }

  /// Unit vector; rejects near-zero draws.
  Vector unit_vector(Eigen::Index dim) {
    for (;;) {
      Vector v = vector(dim);
      const double n = v.norm();
      if (n > 1e-3) return v / n;
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; derives independent stream seeds from (seed, index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace vip
