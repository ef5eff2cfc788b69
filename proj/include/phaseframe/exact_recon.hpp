// exact_recon.hpp
// Exact reconstruction of truncated states psi in H_M from N > M phase samples.
//
// On H_M the resolution operator A = T*T is diag(lambda_0..lambda_M), so the
// dual frame is explicit: the sinc-type kernel
//
//   Xi_k(z) = (1/N) e^{(p - |z|^2)/2} sum_{m=0}^{M} conj(z / z_k)^m
//
// rebuilds Psi(z) from the samples, and a filtered DFT recovers a_m.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "phaseframe/detail/numeric.hpp"
#include "phaseframe/error.hpp"
#include "phaseframe/fock.hpp"
#include "phaseframe/spectral.hpp"

namespace phaseframe {

/// Below this distance from w = 1 the geometric sum is added term by term.
inline constexpr double removable_point_radius = 1e-8;

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

namespace detail {

/// log sum_{m=0}^{count-1} w^m with w = e^s, stable near w = 1 and for |w| large.
inline complex log_geometric_sum(complex s, std::size_t count) {
  if (s.real() == neg_inf) return {0.0, 0.0};  // w = 0: only the m = 0 term
  const complex w = std::exp(s);
  if (std::abs(w - 1.0) < removable_point_radius) {
    complex sum{};
    complex wm{1.0, 0.0};
    for (std::size_t m = 0; m < count; ++m) {
      sum += wm;
      wm *= w;
    }
    return std::log(sum);
  }
  const double L = static_cast<double>(count);
  const complex Ls = L * s;
  if (Ls.real() > 600.0) {
    // w^L dominates: sum = w^L (1 - w^{-L}) / (w - 1)
    return Ls + safe_log(-expm1(-Ls)) - safe_log(expm1(s));
  }
  return safe_log(expm1(Ls)) - safe_log(expm1(s));
}

/// log conj(z / z_k) from the stored polar coordinates.
inline complex log_conj_ratio(const CoherentPoint& z, const CoherentPoint& zk) {
  if (z.p() == 0.0) return {neg_inf, 0.0};
  return {z.log_radius() - zk.log_radius(), -(z.theta() - zk.theta())};
}

inline void require_same_grid(const PhaseGrid& expected, const PhaseGrid& got, const char* who) {
  if (!(expected == got))
    throw grid_mismatch(std::string(who) + ": samples were taken on a different grid (N=" +
                        std::to_string(got.N()) + ", p=" + std::to_string(got.p()) +
                        ") than the reconstructor's (N=" + std::to_string(expected.N()) +
                        ", p=" + std::to_string(expected.p()) + ")");
}

}  // namespace detail

/// Oversampling reconstructor for H_M, N >= M + 1.
class ExactReconstructor {
 public:
  ExactReconstructor(PhaseGrid grid, std::size_t M, double series_tol = default_series_tol)
      : grid_(grid), M_(check_order(grid, M)), spectral_(grid, M, M, series_tol) {}

  const PhaseGrid& grid() const noexcept { return grid_; }
  std::size_t M() const noexcept { return M_; }
  const SpectralData& spectral() const noexcept { return spectral_; }

  /// Frame bounds of the sampling family on H_M: min and max lambda_m.
  FrameBounds frame_bounds() const {
    FrameBounds b{spectral_.lambda(0), spectral_.lambda(0)};
    for (std::size_t m = 1; m <= M_; ++m) {
      b.lower = std::min(b.lower, spectral_.lambda(m));
      b.upper = std::max(b.upper, spectral_.lambda(m));
    }
    return b;
  }

  /// log Xi_k(z).
  complex log_sinc_kernel(std::size_t k, const CoherentPoint& z) const {
    if (k >= grid_.N()) throw std::out_of_range("sinc_kernel: sample index out of range");
    const double N = static_cast<double>(grid_.N());
    const complex s = detail::log_conj_ratio(z, grid_.point(k));
    return -std::log(N) + 0.5 * (grid_.p() - z.p()) + detail::log_geometric_sum(s, M_ + 1);
  }

 private:
  static std::size_t check_order(const PhaseGrid& grid, std::size_t M) {
    if (grid.N() < M + 1)
      throw std::invalid_argument("ExactReconstructor: need N > M (N=" + std::to_string(grid.N()) +
                                  ", M=" + std::to_string(M) + ")");
    return M;
  }

  PhaseGrid grid_;
  std::size_t M_;
  SpectralData spectral_;
};

/// Xi_k(z).
inline complex sinc_kernel(const ExactReconstructor& rec, std::size_t k, const CoherentPoint& z) {
  return detail::exp_log(rec.log_sinc_kernel(k, z));
}

/// Psi(z) = sum_k Xi_k(z) Psi_k. Exact when the samples come from a state in H_M.
inline complex reconstruct_exact(const ExactReconstructor& rec, const SampleSet& samples,
                                 const CoherentPoint& z) {
  detail::require_same_grid(rec.grid(), samples.grid(), "reconstruct_exact");
  complex sum{};
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (samples[k] == complex{}) continue;
    sum += detail::exp_log(rec.log_sinc_kernel(k, z) + std::log(samples[k]));
  }
  return sum;
}

/// a_m = (N lambda_m)^{-1/2} sum_k e^{2 pi i k m / N} Psi_k, m = 0..M.
inline FockVector dft_coefficients(const ExactReconstructor& rec, const SampleSet& samples,
                                   Diagnostics* diag = nullptr) {
  detail::require_same_grid(rec.grid(), samples.grid(), "dft_coefficients");
  const std::size_t N = rec.grid().N();
  const auto roots = detail::roots_table(N);
  const double log_n = std::log(static_cast<double>(N));
  const double floor = log_n + std::log(1e-300);
  std::vector<complex> a(rec.M() + 1);
  for (std::size_t m = 0; m <= rec.M(); ++m) {
    complex s{};
    for (std::size_t k = 0; k < N; ++k) s += roots[(k * m) % N] * samples[k];
    const double log_lam = rec.spectral().log_lambda(m);
    if (log_lam < floor)
      warn(diag, "dft_coefficients: lambda_" + std::to_string(m) +
                     " < 1e-300 N, filter gain exceeds double range");
    a[m] = detail::exp_log(detail::safe_log(s) - 0.5 * (log_n + log_lam));
  }
  return FockVector(std::move(a));
}

/// P = T T_l^+, the orthogonal projector of C^N onto the range of T (rank M + 1):
/// P_{lk} = (1/N) sum_{m=0}^{M} e^{2 pi i (k - l) m / N}.
inline ComplexMatrix range_projector(const ExactReconstructor& rec) {
  const std::size_t N = rec.grid().N();
  const auto roots = detail::roots_table(N);
  const double inv_n = 1.0 / static_cast<double>(N);
  ComplexMatrix P(N, N);
  for (std::size_t l = 0; l < N; ++l) {
    for (std::size_t k = 0; k < N; ++k) {
      const std::size_t d = (k + N - l) % N;
      complex s{};
      for (std::size_t m = 0; m <= rec.M(); ++m) s += roots[(d * m) % N];
      P(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) = s * inv_n;
    }
  }
  return P;
}

}  // namespace phaseframe
