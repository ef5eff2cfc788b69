// random.hpp
// Seeded random states. Draws are built directly from mt19937_64 output bits,
// so a given seed yields the same state on every platform.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "phaseframe/fock.hpp"

namespace phaseframe {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi].
  std::size_t index(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(uniform() * static_cast<double>(hi - lo + 1));
  }

  /// Standard normal by Box-Muller.
  double normal() {
    const double u = 1.0 - uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }

  complex complex_normal() {
    const double re = normal();
    return {re, normal()};
  }

  /// Point with |z|^2 uniform in [0, p_max] and uniform phase.
  CoherentPoint point_in_disk(double p_max) {
    const double p = uniform(0.0, p_max);
    return CoherentPoint::from_polar(p, uniform(-std::numbers::pi, std::numbers::pi));
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Normalized state in H_M with i.i.d. complex Gaussian coefficients.
inline FockVector random_state(Rng& rng, std::size_t M) {
  std::vector<complex> c(M + 1);
  for (auto& a : c) a = rng.complex_normal();
  return FockVector(std::move(c)).normalized();
}

inline std::vector<complex> random_data(Rng& rng, std::size_t N) {
  std::vector<complex> v(N);
  for (auto& a : v) a = rng.complex_normal();
  return v;
}

}  // namespace phaseframe
