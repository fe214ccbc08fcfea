#pragma once

#include <cstdint>
#include <random>

#include "ratmap/complex.hpp"

namespace ratmap {

/// Seeded sampler with a fixed bits-to-double mapping, so sequences are
/// identical across standard library implementations.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform in the square [-half, half]^2.
  Complex in_box(double half) { return {uniform(-half, half), uniform(-half, half)}; }

  /// Uniform in the disk |z| <= radius.
  Complex in_disk(double radius) {
    const double r = radius * std::sqrt(uniform());
    return std::polar(r, uniform(-std::numbers::pi, std::numbers::pi));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ratmap
