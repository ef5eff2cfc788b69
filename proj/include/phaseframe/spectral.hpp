// spectral.hpp
// Eigendata of the circular coherent-state frame.
//
//   lambda_m       = N e^{-p} p^m / m!           resolution operator A = T*T on H_M
//   lambda_hat_j   = sum_q lambda_{j+qN}         eigenvalues of the overlap matrix B = TT*
//   nu_j           = lambda_hat_j / lambda_j - 1 = sum_{u>=1} j! p^{uN} / (j+uN)!
//
// Everything is carried in log space. nu_j is summed directly as a ratio
// series, so lambda_hat_j stays accurate even when lambda_j itself is far
// below the smallest representable double.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "phaseframe/detail/numeric.hpp"
#include "phaseframe/error.hpp"
#include "phaseframe/fock.hpp"

namespace phaseframe {

using ComplexMatrix = Eigen::MatrixXcd;

/// Relative stopping tolerance for the residue-class series.
inline constexpr double default_series_tol = 1e-16;

/// lambda_hat_max / lambda_hat_min above which inversion results are flagged.
inline constexpr double overlap_condition_limit = 1e12;

namespace detail {

inline void require_positive(double p, const char* who) {
  if (!(p > 0.0) || !std::isfinite(p))
    throw std::invalid_argument(std::string(who) + ": p must be a finite positive number");
}

inline void require_tol(double tol) {
  if (!(tol > 0.0) || !(tol < 1.0))
    throw std::invalid_argument("series tolerance must lie in (0, 1)");
}

/// log nu_j(p, N). Terms rise until the running index passes p, so the
/// series is only cut once the index is past p and the newest term is below
/// tol times the partial sum.
inline double log_nu_class(double p, std::size_t N, std::size_t j, double tol) {
  const double log_p = std::log(p);
  const double log_tol = std::log(tol);
  double log_term = 0.0;
  double log_sum = neg_inf;
  std::size_t base = j;
  for (;;) {
    for (std::size_t i = 1; i <= N; ++i) log_term += log_p - std::log(static_cast<double>(base + i));
    base += N;
    log_sum = log_add_exp(log_sum, log_term);
    if (static_cast<double>(base) > p && log_term < log_tol + log_sum) break;
  }
  return log_sum;
}

/// Default series depth: p + 20 sqrt(p) + 10 N.
inline std::size_t default_depth(double p, std::size_t N) {
  return static_cast<std::size_t>(std::ceil(p + 20.0 * std::sqrt(p))) + 10 * N;
}

inline std::vector<complex> roots_table(std::size_t N) {
  std::vector<complex> roots(N);
  for (std::size_t r = 0; r < N; ++r) roots[r] = unit_root(N, static_cast<long long>(r));
  return roots;
}

}  // namespace detail

/// log lambda_m(p, N).
inline double log_lambda(double p, std::size_t N, std::size_t m) {
  detail::require_positive(p, "lambda_m");
  return std::log(static_cast<double>(N)) + detail::log_poisson_pmf(m, p);
}

/// lambda_m(p, N) = N e^{-p} p^m / m!.
inline double lambda_m(double p, std::size_t N, std::size_t m) {
  return std::exp(log_lambda(p, N, m));
}

/// log nu_j for j = 0..N-1.
inline std::vector<double> log_nu(double p, std::size_t N, double tol = default_series_tol) {
  detail::require_positive(p, "nu");
  detail::require_tol(tol);
  std::vector<double> out(N);
  for (std::size_t j = 0; j < N; ++j) out[j] = detail::log_nu_class(p, N, j, tol);
  return out;
}

inline std::vector<double> nu(double p, std::size_t N, double tol = default_series_tol) {
  auto out = log_nu(p, N, tol);
  for (auto& v : out) v = std::exp(v);
  return out;
}

inline double nu0(double p, std::size_t N, double tol = default_series_tol) {
  detail::require_positive(p, "nu");
  detail::require_tol(tol);
  return std::exp(detail::log_nu_class(p, N, 0, tol));
}

inline std::vector<double> log_lambda_hat(double p, std::size_t N,
                                          double tol = default_series_tol) {
  auto out = log_nu(p, N, tol);
  for (std::size_t j = 0; j < N; ++j) out[j] = log_lambda(p, N, j) + detail::log1p_exp(out[j]);
  return out;
}

/// Eigenvalues lambda_hat_j of the overlap matrix, j = 0..N-1.
inline std::vector<double> lambda_hat(double p, std::size_t N, double tol = default_series_tol) {
  auto out = log_lambda_hat(p, N, tol);
  for (auto& v : out) v = std::exp(v);
  return out;
}

/// p_0(N) = ((2N)! / N!)^{1/N}: below it the first term of nu_0 dominates.
inline double p_critical(std::size_t N) {
  if (N < 1) throw std::invalid_argument("p_critical: N must be at least 1");
  const double n = static_cast<double>(N);
  return std::exp((detail::log_factorial(2 * N) - detail::log_factorial(N)) / n);
}

/// (4/e) N (1 + ln 2 / (2N)).
inline double p_critical_asymptotic(std::size_t N) {
  if (N < 1) throw std::invalid_argument("p_critical: N must be at least 1");
  const double n = static_cast<double>(N);
  return 4.0 / std::numbers::e * n * (1.0 + std::numbers::ln2 / (2.0 * n));
}

/// Per-grid eigendata, materialized up to n_max and extended on demand.
class SpectralData {
 public:
  explicit SpectralData(PhaseGrid grid, std::optional<std::size_t> M = std::nullopt,
                        std::optional<std::size_t> n_max = std::nullopt,
                        double series_tol = default_series_tol)
      : grid_(grid), M_(M), series_tol_(series_tol) {
    detail::require_tol(series_tol);
    const std::size_t N = grid_.N();
    const double p = grid_.p();
    n_max_ = n_max.value_or(detail::default_depth(p, N));
    if (M_) n_max_ = std::max(n_max_, *M_);
    n_max_ = std::max(n_max_, N - 1);

    log_lambda_.resize(n_max_ + 1);
    lambda_.resize(n_max_ + 1);
    for (std::size_t m = 0; m <= n_max_; ++m) {
      log_lambda_[m] = phaseframe::log_lambda(p, N, m);
      lambda_[m] = std::exp(log_lambda_[m]);
    }
    log_nu_ = phaseframe::log_nu(p, N, series_tol_);
    nu_.resize(N);
    log_lambda_hat_.resize(N);
    lambda_hat_.resize(N);
    for (std::size_t j = 0; j < N; ++j) {
      nu_[j] = std::exp(log_nu_[j]);
      log_lambda_hat_[j] = log_lambda_[j] + detail::log1p_exp(log_nu_[j]);
      lambda_hat_[j] = std::exp(log_lambda_hat_[j]);
    }
  }

  const PhaseGrid& grid() const noexcept { return grid_; }
  std::size_t N() const noexcept { return grid_.N(); }
  double p() const noexcept { return grid_.p(); }
  std::optional<std::size_t> truncation_order() const noexcept { return M_; }
  std::size_t n_max() const noexcept { return n_max_; }
  double series_tol() const noexcept { return series_tol_; }

  double log_lambda(std::size_t m) const {
    return m <= n_max_ ? log_lambda_[m] : phaseframe::log_lambda(grid_.p(), grid_.N(), m);
  }
  double lambda(std::size_t m) const { return m <= n_max_ ? lambda_[m] : std::exp(log_lambda(m)); }
  std::span<const double> lambdas() const noexcept { return lambda_; }

  double log_lambda_hat(std::size_t j) const { return log_lambda_hat_.at(j); }
  double lambda_hat(std::size_t j) const { return lambda_hat_.at(j); }
  std::span<const double> lambda_hats() const noexcept { return lambda_hat_; }

  double log_nu(std::size_t j) const { return log_nu_.at(j); }
  double nu(std::size_t j) const { return nu_.at(j); }
  std::span<const double> nus() const noexcept { return nu_; }

  /// lambda_hat_max / lambda_hat_min.
  double overlap_condition() const {
    const auto [lo, hi] = std::minmax_element(log_lambda_hat_.begin(), log_lambda_hat_.end());
    return std::exp(*hi - *lo);
  }

 private:
  PhaseGrid grid_;
  std::optional<std::size_t> M_;
  double series_tol_;
  std::size_t n_max_ = 0;
  std::vector<double> log_lambda_, lambda_;
  std::vector<double> log_nu_, nu_;
  std::vector<double> log_lambda_hat_, lambda_hat_;
};

/// The Gram matrix B_{kl} = <z_k|z_l> = C_{l-k}, a Hermitian circulant.
class CirculantOverlap {
 public:
  CirculantOverlap(PhaseGrid grid, std::vector<complex> first_row, std::vector<double> eigenvalues,
                   std::vector<double> log_eigenvalues)
      : grid_(grid),
        first_row_(std::move(first_row)),
        eigenvalues_(std::move(eigenvalues)),
        log_eigenvalues_(std::move(log_eigenvalues)) {}

  const PhaseGrid& grid() const noexcept { return grid_; }
  std::size_t N() const noexcept { return grid_.N(); }
  std::span<const complex> first_row() const noexcept { return first_row_; }
  std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
  std::span<const double> log_eigenvalues() const noexcept { return log_eigenvalues_; }

  complex entry(std::size_t k, std::size_t l) const {
    const std::size_t N = grid_.N();
    return first_row_[(l + N - k % N) % N];
  }

  /// B v, by direct O(N^2) summation.
  std::vector<complex> apply(std::span<const complex> v) const {
    const std::size_t N = grid_.N();
    if (v.size() != N) throw std::invalid_argument("CirculantOverlap::apply: length mismatch");
    std::vector<complex> out(N);
    for (std::size_t k = 0; k < N; ++k) {
      complex s{};
      for (std::size_t l = 0; l < N; ++l) s += entry(k, l) * v[l];
      out[k] = s;
    }
    return out;
  }

  /// lambda_hat_j = sum_l C_l e^{-2 pi i l j / N}, the Fourier route.
  std::vector<double> dft_eigenvalues() const {
    const std::size_t N = grid_.N();
    const auto roots = detail::roots_table(N);
    std::vector<double> out(N);
    for (std::size_t j = 0; j < N; ++j) {
      complex s{};
      for (std::size_t l = 0; l < N; ++l) s += first_row_[l] * std::conj(roots[(l * j) % N]);
      out[j] = s.real();
    }
    return out;
  }

  /// max_j |lambda_hat_j(series) - lambda_hat_j(DFT)| / max_j lambda_hat_j.
  double eigen_deviation() const {
    const auto dft = dft_eigenvalues();
    double dev = 0.0;
    double top = 0.0;
    for (std::size_t j = 0; j < dft.size(); ++j) {
      dev = std::max(dev, std::abs(dft[j] - eigenvalues_[j]));
      top = std::max(top, eigenvalues_[j]);
    }
    return dev / top;
  }

  double condition() const {
    const auto [lo, hi] = std::minmax_element(log_eigenvalues_.begin(), log_eigenvalues_.end());
    return std::exp(*hi - *lo);
  }

 private:
  PhaseGrid grid_;
  std::vector<complex> first_row_;
  std::vector<double> eigenvalues_;
  std::vector<double> log_eigenvalues_;
};

/// Builds B for the grid: first row C_l = e^{-p} exp(p e^{2 pi i l / N}),
/// eigenvalues from the residue series, cross-checked against the DFT of the
/// first row.
inline CirculantOverlap build_overlap(const PhaseGrid& grid, Diagnostics* diag = nullptr,
                                      double series_tol = default_series_tol) {
  const std::size_t N = grid.N();
  const double p = grid.p();
  std::vector<complex> row(N);
  for (std::size_t l = 0; l < N; ++l) {
    const complex w = detail::unit_root(N, static_cast<long long>(l));
    row[l] = std::exp(complex{p * (w.real() - 1.0), p * w.imag()});
  }
  auto logs = log_lambda_hat(p, N, series_tol);
  std::vector<double> eig(N);
  for (std::size_t j = 0; j < N; ++j) eig[j] = std::exp(logs[j]);
  CirculantOverlap B(grid, std::move(row), std::move(eig), std::move(logs));

  const double dev = B.eigen_deviation();
  if (dev > 1e-10)
    warn(diag, "build_overlap: series and DFT eigenvalues differ by " + std::to_string(dev) +
                   " relative to the largest eigenvalue");
  return B;
}

/// B^{-1} v = F diag(1 / lambda_hat) F* v, with F_{kn} = e^{-2 pi i k n / N} / sqrt(N).
inline std::vector<complex> apply_overlap_inverse(const CirculantOverlap& B,
                                                  std::span<const complex> v,
                                                  Diagnostics* diag = nullptr) {
  const std::size_t N = B.N();
  if (v.size() != N) throw std::invalid_argument("apply_overlap_inverse: length mismatch");
  const double cond = B.condition();
  if (cond > overlap_condition_limit)
    warn(diag, "apply_overlap_inverse: overlap matrix condition number " + std::to_string(cond) +
                   " exceeds 1e12");

  const auto roots = detail::roots_table(N);
  const auto log_eig = B.log_eigenvalues();
  std::vector<complex> spectrum(N);
  for (std::size_t j = 0; j < N; ++j) {
    complex s{};
    for (std::size_t l = 0; l < N; ++l) s += roots[(l * j) % N] * v[l];
    spectrum[j] = s * std::exp(-log_eig[j]);
  }
  std::vector<complex> out(N);
  const double inv_n = 1.0 / static_cast<double>(N);
  for (std::size_t k = 0; k < N; ++k) {
    complex s{};
    for (std::size_t j = 0; j < N; ++j) s += std::conj(roots[(k * j) % N]) * spectrum[j];
    out[k] = s * inv_n;
  }
  return out;
}

/// Gram matrix G_{nm} = sum_k conj(F_{kn}) F_{km} of the N x (M+1) rectangular
/// Fourier matrix; equals delta_{(n-m) mod N, 0}.
inline ComplexMatrix rfm_gram(std::size_t N, std::size_t M) {
  if (N < 1) throw std::invalid_argument("rfm_gram: N must be at least 1");
  const auto roots = detail::roots_table(N);
  const double inv_n = 1.0 / static_cast<double>(N);
  ComplexMatrix G(M + 1, M + 1);
  for (std::size_t n = 0; n <= M; ++n) {
    for (std::size_t m = 0; m <= M; ++m) {
      complex s{};
      for (std::size_t k = 0; k < N; ++k) {
        // conj(e^{-2 pi i k n / N}) e^{-2 pi i k m / N} = e^{2 pi i k (n - m) / N}
        const std::size_t r = (k * ((n + N * (m + 1) - m) % N)) % N;
        s += roots[r];
      }
      G(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) = s * inv_n;
    }
  }
  return G;
}

struct RfmCheck {
  bool pass = false;
  double max_deviation = 0.0;
};

/// Checks the mod-N orthogonality of the rectangular Fourier matrix for n, m <= M.
inline RfmCheck rfm_orthogonality_check(std::size_t N, std::size_t M) {
  const auto G = rfm_gram(N, M);
  double dev = 0.0;
  for (std::size_t n = 0; n <= M; ++n) {
    for (std::size_t m = 0; m <= M; ++m) {
      const double expected = ((n + N * (m + 1) - m) % N == 0) ? 1.0 : 0.0;
      dev = std::max(dev, std::abs(G(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) -
                                   complex{expected, 0.0}));
    }
  }
  return {dev <= 1e-12, dev};
}

}  // namespace phaseframe
