// partial_recon.hpp
// Partial reconstruction (undersampling) for states with unbounded particle number.
//
// The sampled coherent states are linearly independent, so B = TT* is
// invertible and P_S = T* B^{-1} T projects onto their span. The alias
// psi_hat = P_S psi is rebuilt through Lagrange-like kernels
//
//   L_k(z) = (1/N) e^{(p - |z|^2)/2} sum_n (lambda_n / lambda_hat_{n mod N}) conj(z / z_k)^n
//
// with L_k(z_l) = delta_kl.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "phaseframe/detail/numeric.hpp"
#include "phaseframe/error.hpp"
#include "phaseframe/exact_recon.hpp"
#include "phaseframe/fock.hpp"
#include "phaseframe/spectral.hpp"

namespace phaseframe {

class PartialReconstructor {
 public:
  explicit PartialReconstructor(PhaseGrid grid, std::optional<std::size_t> n_max = std::nullopt,
                                double series_tol = default_series_tol)
      : grid_(grid),
        spectral_(grid, std::nullopt,
                  std::max(n_max.value_or(detail::default_depth(grid.p(), grid.N())), grid.N()),
                  series_tol) {}

  const PhaseGrid& grid() const noexcept { return grid_; }
  const SpectralData& spectral() const noexcept { return spectral_; }
  /// Largest Fock index of reconstructed expansions.
  std::size_t n_max() const noexcept { return spectral_.n_max(); }

  /// |z|^2 beyond which evaluation is extrapolation away from the sampling circle.
  double extrapolation_radius2() const {
    const double p = grid_.p();
    return p + 40.0 * std::sqrt(p) + 10.0 * static_cast<double>(grid_.N());
  }

  /// log L_k(z).
  complex log_lagrange_kernel(std::size_t k, const CoherentPoint& z) const {
    const std::size_t N = grid_.N();
    if (k >= N) throw std::out_of_range("lagrange_kernel: sample index out of range");
    const double p = grid_.p();
    const double prefactor = -std::log(static_cast<double>(N)) + 0.5 * (p - z.p());
    if (z.p() == 0.0) return prefactor + spectral_.log_lambda(0) - spectral_.log_lambda_hat(0);

    const complex s = detail::log_conj_ratio(z, grid_.point(k));
    // The term magnitudes peak near n = |z| sqrt(p); stop only past that and past p.
    const double mode = std::max(p, std::sqrt(z.p() * p));
    const double log_tol = std::log(spectral_.series_tol());
    std::vector<complex> terms;
    double log_total = detail::neg_inf;
    for (std::size_t n = 0;; ++n) {
      const complex t = spectral_.log_lambda(n) - spectral_.log_lambda_hat(n % N) +
                        static_cast<double>(n) * s;
      terms.push_back(t);
      log_total = detail::log_add_exp(log_total, t.real());
      if (static_cast<double>(n) > mode && t.real() < log_tol + log_total) break;
    }
    double top = detail::neg_inf;
    for (const auto& t : terms) top = std::max(top, t.real());
    complex sum{};
    for (const auto& t : terms) sum += std::exp(t - top);
    return prefactor + top + detail::safe_log(sum);
  }

  /// 1 + nu_n = lambda_hat_n / lambda_n, n < N.
  double filter_factor(std::size_t n) const {
    return std::exp(spectral_.log_lambda_hat(n) - spectral_.log_lambda(n));
  }

 private:
  PhaseGrid grid_;
  SpectralData spectral_;
};

/// L_k(z).
inline complex lagrange_kernel(const PartialReconstructor& rec, std::size_t k,
                               const CoherentPoint& z) {
  return detail::exp_log(rec.log_lagrange_kernel(k, z));
}

/// psi_hat(z) = sum_k L_k(z) Psi_k. Interpolates the data at the grid points.
inline complex reconstruct_partial(const PartialReconstructor& rec, const SampleSet& samples,
                                   const CoherentPoint& z, Diagnostics* diag = nullptr) {
  detail::require_same_grid(rec.grid(), samples.grid(), "reconstruct_partial");
  if (z.p() > rec.extrapolation_radius2())
    warn(diag, "reconstruct_partial: |z|^2 = " + std::to_string(z.p()) +
                   " lies far outside the sampling circle; the alias is concentrated near it");
  complex sum{};
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (samples[k] == complex{}) continue;
    sum += detail::exp_log(rec.log_lagrange_kernel(k, z) + std::log(samples[k]));
  }
  return sum;
}

namespace detail {

/// D_j = sum_k e^{2 pi i j k / N} Psi_k for j = 0..N-1.
inline std::vector<complex> forward_sums(const SampleSet& samples) {
  const std::size_t N = samples.size();
  const auto roots = roots_table(N);
  std::vector<complex> d(N);
  for (std::size_t j = 0; j < N; ++j) {
    complex s{};
    for (std::size_t k = 0; k < N; ++k) s += roots[(j * k) % N] * samples[k];
    d[j] = s;
  }
  return d;
}

}  // namespace detail

/// Fourier coefficients of the alias,
/// a_hat_n = lambda_n^{1/2} / lambda_hat_{n mod N} N^{-1/2} sum_k e^{2 pi i n k / N} Psi_k,
/// for n = 0..n_max.
inline FockVector alias_coefficients(const PartialReconstructor& rec, const SampleSet& samples) {
  detail::require_same_grid(rec.grid(), samples.grid(), "alias_coefficients");
  const std::size_t N = rec.grid().N();
  const auto& sp = rec.spectral();
  const auto d = detail::forward_sums(samples);
  const double half_log_n = 0.5 * std::log(static_cast<double>(N));
  std::vector<complex> a(rec.n_max() + 1);
  for (std::size_t n = 0; n <= rec.n_max(); ++n) {
    const std::size_t j = n % N;
    a[n] = detail::exp_log(detail::safe_log(d[j]) + 0.5 * sp.log_lambda(n) -
                           sp.log_lambda_hat(j) - half_log_n);
  }
  return FockVector(std::move(a));
}

/// <m|P_S|n> = (lambda_m lambda_n)^{1/2} / lambda_hat_{n mod N} when m = n (mod N), else 0.
inline double projector_elements(const PartialReconstructor& rec, std::size_t m, std::size_t n) {
  if (m > rec.n_max() || n > rec.n_max())
    throw std::out_of_range("projector_elements: index beyond n_max");
  const std::size_t N = rec.grid().N();
  if (m % N != n % N) return 0.0;
  const auto& sp = rec.spectral();
  return std::exp(0.5 * (sp.log_lambda(m) + sp.log_lambda(n)) - sp.log_lambda_hat(n % N));
}

/// Truncate the alias to H_M and rescale by lambda_hat_n / lambda_n. With M = N - 1
/// this is the exact-mode DFT, so states in H_{N-1} are recovered exactly.
inline FockVector reconstruct_filtered(const PartialReconstructor& rec, const SampleSet& samples,
                                       std::optional<std::size_t> M = std::nullopt) {
  detail::require_same_grid(rec.grid(), samples.grid(), "reconstruct_filtered");
  const std::size_t N = rec.grid().N();
  const std::size_t order = M.value_or(N - 1);
  if (order >= N)
    throw std::invalid_argument("reconstruct_filtered: M must be below N (M=" +
                                std::to_string(order) + ", N=" + std::to_string(N) + ")");
  const auto& sp = rec.spectral();
  const auto d = detail::forward_sums(samples);
  const double half_log_n = 0.5 * std::log(static_cast<double>(N));
  std::vector<complex> a(order + 1);
  for (std::size_t n = 0; n <= order; ++n)
    a[n] = detail::exp_log(detail::safe_log(d[n]) - half_log_n - 0.5 * sp.log_lambda(n));
  return FockVector(std::move(a));
}

}  // namespace phaseframe
