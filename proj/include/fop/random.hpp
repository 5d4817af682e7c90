#pragma once

#include "fop/common.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

namespace fop {

inline constexpr std::uint64_t kLibrarySeed = 0x5EED;
inline constexpr std::uint64_t kSolverSeed = 0xB0B0;

/// Counter-based stream: the n-th draw is a pure function of (seed, n), so a
/// stream can be re-created anywhere and replayed exactly.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64() { return mix(seed_ ^ (0x9E3779B97F4A7C15ULL * ++counter_)); }

  /// Uniform in (0, 1).
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Standard complex Gaussian, E|z|^2 = 1.
  cplx complex_normal() { return cplx(normal(), normal()) / std::sqrt(2.0); }

  cplx unit_complex() { return std::polar(1.0, 2.0 * std::numbers::pi * uniform()); }

  CVec complex_vector(Eigen::Index n) {
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal();
    return v;
  }

  /// Independent child stream, deterministic in (seed, tag).
  RandomStream fork(std::uint64_t tag) const { return RandomStream(mix(seed_ + 0xA5A5A5A5ULL * (tag + 1))); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace fop
