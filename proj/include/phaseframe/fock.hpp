// fock.hpp
// Fock-space states, coherent-state amplitudes and the circular phase grid.
//
// States are stored as finite coefficient vectors a_0..a_M in the number
// basis. Coherent-state amplitudes U_n(z) = e^{-|z|^2/2} z^n / sqrt(n!) are
// evaluated in log-magnitude/phase form so that large n and large |z|^2
// neither overflow nor underflow before the final exponentiation.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "phaseframe/detail/numeric.hpp"
#include "phaseframe/error.hpp"

namespace phaseframe {

using complex = std::complex<double>;

/// Declared decay |a_n| <= C / n^alpha for indices beyond the stored ones.
struct TailProfile {
  double C = 0.0;
  double alpha = 1.0;
};

class FockVector {
 public:
  FockVector() : coefficients_(1) {}

  explicit FockVector(std::vector<complex> coefficients,
                      std::optional<TailProfile> tail = std::nullopt)
      : coefficients_(std::move(coefficients)), tail_(tail) {
    if (coefficients_.empty())
      throw std::invalid_argument("FockVector: at least one coefficient is required");
    for (const auto& a : coefficients_) {
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw std::invalid_argument("FockVector: coefficients must be finite");
    }
    if (tail_) {
      if (!(tail_->C >= 0.0) || !std::isfinite(tail_->C))
        throw std::invalid_argument("FockVector: tail C must be a finite non-negative number");
      if (!(tail_->alpha > 0.5) || !std::isfinite(tail_->alpha))
        throw std::invalid_argument("FockVector: tail alpha must be > 1/2");
    }
  }

  /// |n>, padded with zeros up to `length` entries (at least n + 1).
  static FockVector basis(std::size_t n, std::size_t length = 0) {
    std::vector<complex> c(std::max(length, n + 1));
    c[n] = 1.0;
    return FockVector(std::move(c));
  }

  static FockVector zero(std::size_t length) {
    return FockVector(std::vector<complex>(std::max<std::size_t>(length, 1)));
  }

  std::size_t size() const noexcept { return coefficients_.size(); }
  /// Largest stored Fock index M.
  std::size_t max_index() const noexcept { return coefficients_.size() - 1; }

  complex operator[](std::size_t n) const { return coefficients_[n]; }
  /// a_n, with zero for indices beyond the stored ones.
  complex at_or_zero(std::size_t n) const {
    return n < coefficients_.size() ? coefficients_[n] : complex{};
  }

  std::span<const complex> coefficients() const noexcept { return coefficients_; }
  const std::optional<TailProfile>& tail() const noexcept { return tail_; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : coefficients_) s += std::norm(a);
    return s;
  }
  double norm() const { return std::sqrt(norm_squared()); }

  FockVector normalized() const {
    const double nrm = norm();
    if (nrm == 0.0) throw std::invalid_argument("FockVector: cannot normalize the zero state");
    std::vector<complex> c(coefficients_);
    for (auto& a : c) a /= nrm;
    return FockVector(std::move(c), tail_);
  }

  /// P_M psi, i.e. the first M + 1 coefficients. The tail declaration is dropped.
  FockVector truncated(std::size_t M) const {
    std::vector<complex> c(M + 1);
    for (std::size_t n = 0; n <= M && n < coefficients_.size(); ++n) c[n] = coefficients_[n];
    return FockVector(std::move(c));
  }

 private:
  std::vector<complex> coefficients_;
  std::optional<TailProfile> tail_;
};

/// A point z of the complex plane with its phase-number coordinates p = |z|^2
/// and theta = arg z in (-pi, pi].
class CoherentPoint {
 public:
  CoherentPoint() = default;
  CoherentPoint(complex z) : z_(z), theta_(normalize(std::arg(z))) {}  // NOLINT

  /// sqrt(p) e^{i theta}. The exact angle is kept so that phase differences
  /// between grid points do not pick up rounding from atan2.
  static CoherentPoint from_polar(double p, double theta) {
    CoherentPoint pt;
    pt.theta_ = normalize(std::remainder(theta, detail::two_pi));
    pt.z_ = std::polar(std::sqrt(p), pt.theta_);
    pt.p_ = p;
    pt.exact_p_ = true;
    return pt;
  }

  complex z() const noexcept { return z_; }
  double p() const noexcept { return exact_p_ ? p_ : std::norm(z_); }
  double theta() const noexcept { return theta_; }
  /// log |z|, -inf at the origin.
  double log_radius() const {
    const double pp = p();
    return pp > 0.0 ? 0.5 * std::log(pp) : detail::neg_inf;
  }

 private:
  static double normalize(double t) { return t <= -std::numbers::pi ? t + detail::two_pi : t; }

  complex z_{};
  double theta_ = 0.0;
  double p_ = 0.0;
  bool exact_p_ = false;
};

/// N points z_k = sqrt(p) e^{2 pi i k / N} on the circle of mean particle number p.
class PhaseGrid {
 public:
  PhaseGrid(std::size_t N, double p) : N_(N), p_(p) {
    if (N < 1) throw invalid_grid("PhaseGrid: N must be at least 1");
    if (p == 0.0) throw degenerate_grid("PhaseGrid: p = 0 places every sample at the origin");
    if (!(p > 0.0) || !std::isfinite(p))
      throw invalid_grid("PhaseGrid: p must be a finite positive number");
  }

  std::size_t N() const noexcept { return N_; }
  double p() const noexcept { return p_; }

  double angle(std::size_t k) const {
    return detail::two_pi * static_cast<double>(k % N_) / static_cast<double>(N_);
  }
  CoherentPoint point(std::size_t k) const { return CoherentPoint::from_polar(p_, angle(k)); }

  std::vector<CoherentPoint> points() const {
    std::vector<CoherentPoint> pts;
    pts.reserve(N_);
    for (std::size_t k = 0; k < N_; ++k) pts.push_back(point(k));
    return pts;
  }

  friend bool operator==(const PhaseGrid& a, const PhaseGrid& b) noexcept {
    return a.N_ == b.N_ && a.p_ == b.p_;
  }

 private:
  std::size_t N_;
  double p_;
};

/// Samples Psi_k = <z_k|psi> attached to their grid.
class SampleSet {
 public:
  SampleSet(PhaseGrid grid, std::vector<complex> values)
      : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.N())
      throw std::invalid_argument("SampleSet: expected " + std::to_string(grid_.N()) +
                                  " values, got " + std::to_string(values_.size()));
    for (const auto& v : values_) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::invalid_argument("SampleSet: values must be finite");
    }
  }

  const PhaseGrid& grid() const noexcept { return grid_; }
  std::span<const complex> values() const noexcept { return values_; }
  complex operator[](std::size_t k) const { return values_[k]; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  PhaseGrid grid_;
  std::vector<complex> values_;
};

/// U_n(z) held as log|U_n| and arg U_n.
struct LogAmplitude {
  double log_magnitude = 0.0;
  double phase = 0.0;

  complex value() const {
    if (log_magnitude == detail::neg_inf) return {};
    return std::polar(std::exp(log_magnitude), phase);
  }
};

inline LogAmplitude log_coherent_amplitude(std::size_t n, const CoherentPoint& z) {
  const double p = z.p();
  if (n == 0) return {-0.5 * p, 0.0};
  if (p == 0.0) return {detail::neg_inf, 0.0};
  return {0.5 * detail::log_poisson_pmf(n, p), static_cast<double>(n) * z.theta()};
}

/// U_n(z) = <n|z> = e^{-|z|^2/2} z^n / sqrt(n!).
inline complex coherent_amplitude(std::size_t n, const CoherentPoint& z) {
  return log_coherent_amplitude(n, z).value();
}

/// Reproducing kernel C(z1, z2) = <z1|z2>.
inline complex cs_overlap(const CoherentPoint& z1, const CoherentPoint& z2) {
  const complex e = -0.5 * z1.p() - 0.5 * z2.p() + std::conj(z1.z()) * z2.z();
  return std::exp(e);
}

/// Psi(z) = <z|psi> = sum_n a_n conj(U_n(z)).
inline complex evaluate(const FockVector& psi, const CoherentPoint& z) {
  complex sum{};
  const auto a = psi.coefficients();
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (a[n] == complex{}) continue;
    sum += a[n] * std::conj(coherent_amplitude(n, z));
  }
  return sum;
}

inline SampleSet sample(const FockVector& psi, const PhaseGrid& grid) {
  std::vector<complex> values(grid.N());
  for (std::size_t k = 0; k < grid.N(); ++k) values[k] = evaluate(psi, grid.point(k));
  return SampleSet(grid, std::move(values));
}

/// Coefficients U_n(zeta) of the coherent state |zeta>, n = 0..length-1.
inline FockVector coherent_state(const CoherentPoint& zeta, std::size_t length) {
  std::vector<complex> c(std::max<std::size_t>(length, 1));
  for (std::size_t n = 0; n < c.size(); ++n) c[n] = coherent_amplitude(n, zeta);
  return FockVector(std::move(c));
}

}  // namespace phaseframe
