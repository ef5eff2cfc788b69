// error_analysis.hpp
// Error functionals for partial reconstruction: truncation distance, the
// coherent-state truncation mass, the alias error bound and its filtered
// counterpart, and the droplet function P_M(p).

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>

#include "phaseframe/detail/numeric.hpp"
#include "phaseframe/error.hpp"
#include "phaseframe/fock.hpp"
#include "phaseframe/oracle.hpp"
#include "phaseframe/spectral.hpp"

namespace phaseframe {

/// Oracle measurement in assess() is attempted only up to these sizes.
inline constexpr std::size_t assess_max_N = 32;
inline constexpr std::size_t assess_max_length = 400;

/// epsilon_{M+1}(psi). With a declared tail the stored coefficients say
/// nothing exact about the mass beyond them, and the result is an upper bound.
struct TruncationEpsilon {
  double value = 0.0;
  bool is_bound = false;
};

namespace detail {

/// Upper bound on sum_{n >= start} C^2 / n^{2 alpha}.
inline double tail_mass_bound(const TailProfile& tail, std::size_t start) {
  const double c2 = tail.C * tail.C;
  const double k = 2.0 * tail.alpha - 1.0;
  if (start <= 1) return c2 * (1.0 + 1.0 / k);  // n = 1 term plus the integral from 1
  return c2 / (k * std::pow(static_cast<double>(start - 1), k));
}

}  // namespace detail

inline TruncationEpsilon truncation_epsilon(const FockVector& psi, std::size_t M) {
  double head = 0.0;
  double tail = 0.0;
  const auto a = psi.coefficients();
  for (std::size_t n = 0; n < a.size(); ++n) (n <= M ? head : tail) += std::norm(a[n]);
  bool bound = false;
  if (psi.tail()) {
    tail += detail::tail_mass_bound(*psi.tail(), std::max(M + 1, a.size()));
    bound = true;
  }
  if (head + tail == 0.0) throw std::invalid_argument("truncation_epsilon: zero state");
  return {std::sqrt(tail / (head + tail)), bound};
}

namespace detail {

/// sum_{k >= k0} e^{-p} p^k / k!, summed from k0 upward; accurate when k0 lies above the bulk.
inline double poisson_upper_tail(std::size_t k0, double p) {
  double s = 0.0;
  for (std::size_t k = k0;; ++k) {
    const double t = std::exp(log_poisson_pmf(k, p));
    s += t;
    if (t <= 1e-17 * s || t == 0.0) break;
  }
  return s;
}

}  // namespace detail

/// P_M(p) = <z|P_M|z> = e^{-p} sum_{m=0}^{M} p^m / m! for |z|^2 = p.
inline double droplet(std::size_t M, double p) {
  if (!(p >= 0.0)) throw std::invalid_argument("droplet: p must be non-negative");
  if (p == 0.0) return 1.0;
  if (p <= static_cast<double>(M) + 1.0) return 1.0 - detail::poisson_upper_tail(M + 1, p);
  double s = 0.0;
  for (std::size_t m = 0; m <= M; ++m) s += std::exp(detail::log_poisson_pmf(m, p));
  return std::min(s, 1.0);
}

/// -dP_M/dp = e^{-p} p^M / M!, the Erlang-(M+1) density.
inline double erlang_density(std::size_t M, double p) {
  if (p == 0.0) return M == 0 ? 1.0 : 0.0;
  return std::exp(detail::log_poisson_pmf(M, p));
}

/// epsilon_N^2(zeta) = 1 - Gamma(N, p) / Gamma(N) = sum_{k >= N} e^{-p} p^k / k!, p = |zeta|^2.
inline double coherent_epsilon(double p, std::size_t N) {
  if (N < 1) throw std::invalid_argument("coherent_epsilon: N must be at least 1");
  if (!(p >= 0.0)) throw std::invalid_argument("coherent_epsilon: p must be non-negative");
  if (p == 0.0) return 0.0;
  if (p >= static_cast<double>(N)) return 1.0 - droplet(N - 1, p);
  return detail::poisson_upper_tail(N, p);
}

inline double coherent_epsilon(const CoherentPoint& zeta, std::size_t N) {
  return coherent_epsilon(zeta.p(), N);
}

/// Bound on the squared relative alias error E_psi^2:
///   nu0/(1+nu0) + 2 eps sqrt(1-eps^2) + eps^2 (2+nu0)/(1+nu0).
inline double error_bound(double eps, double p, std::size_t N,
                          double series_tol = default_series_tol) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("error_bound: eps must lie in [0, 1]");
  const double v = nu0(p, N, series_tol);
  return v / (1.0 + v) + 2.0 * eps * std::sqrt(1.0 - eps * eps) +
         eps * eps * (2.0 + v) / (1.0 + v);
}

/// Bound on the squared relative error after truncation and filtering:
///   eps^2 (1 + (1+nu0)^2).
inline double filtered_error_bound(double eps, double p, std::size_t N,
                                   double series_tol = default_series_tol) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("filtered_error_bound: eps must lie in [0, 1]");
  const double v = nu0(p, N, series_tol);
  return eps * eps * (1.0 + (1.0 + v) * (1.0 + v));
}

struct ErrorReport {
  double epsilon_N = 0.0;
  bool epsilon_is_bound = false;
  double nu0 = 0.0;
  double p0 = 0.0;
  double bound = 0.0;
  double bound_filtered = 0.0;
  std::optional<double> measured;
  bool in_asymptotic_regime = false;
  /// measured^2 <= bound; empty when nothing was measured.
  std::optional<bool> bound_holds;
};

inline ErrorReport assess(const FockVector& psi, const PhaseGrid& grid,
                          double series_tol = default_series_tol, Diagnostics* diag = nullptr) {
  const std::size_t N = grid.N();
  const double p = grid.p();
  ErrorReport r;
  const auto eps = truncation_epsilon(psi, N - 1);
  r.epsilon_N = eps.value;
  r.epsilon_is_bound = eps.is_bound;
  r.nu0 = nu0(p, N, series_tol);
  r.p0 = p_critical(N);
  r.in_asymptotic_regime = p < r.p0;
  r.bound = error_bound(eps.value, p, N, series_tol);
  r.bound_filtered = filtered_error_bound(eps.value, p, N, series_tol);
  if (N <= assess_max_N && psi.size() <= assess_max_length) {
    const std::size_t depth = std::max(
        std::min(detail::default_depth(p, N), oracle::max_default_columns), psi.max_index());
    const oracle::DenseFrame frame(grid, depth);
    const double e = oracle::projection_error(frame, psi, diag);
    r.measured = e;
    r.bound_holds = e * e <= r.bound;
    if (!*r.bound_holds)
      warn(diag, "assess: measured squared error exceeds the bound");
  }
  return r;
}

}  // namespace phaseframe
