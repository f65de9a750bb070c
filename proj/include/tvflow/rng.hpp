#pragma once

#include <cstdint>

#include "tvflow/fem.hpp"

namespace tvflow {

/// Deterministic 64-bit generator (splitmix64), identical across platforms.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [-1, 1).
  double symmetric() { return 2.0 * uniform() - 1.0; }
};

inline ScalarField random_field(const FeSpace& space, SplitMix64& rng) {
  ScalarField f(space.mesh);
  for (Eigen::Index i = 0; i < f.coeffs.size(); ++i) f.coeffs[i] = rng.symmetric();
  return f;
}

}  // namespace tvflow
