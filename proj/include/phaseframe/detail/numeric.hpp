#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>

namespace phaseframe::detail {

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

inline double log_factorial(std::size_t n) {
  return std::lgamma(static_cast<double>(n) + 1.0);
}

/// log(n!) - [(n + 1/2) log n - n + log sqrt(2 pi)], the Stirling remainder.
inline double stirling_error(std::size_t n) {
  const double x = static_cast<double>(n);
  if (n <= 15) {
    return log_factorial(n) - (x + 0.5) * std::log(x) + x - 0.5 * std::log(two_pi);
  }
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  const double xx = x * x;
  if (n > 500) return (s0 - s1 / xx) / x;
  if (n > 80) return (s0 - (s1 - s2 / xx) / xx) / x;
  if (n > 35) return (s0 - (s1 - (s2 - s3 / xx) / xx) / xx) / x;
  return (s0 - (s1 - (s2 - (s3 - s4 / xx) / xx) / xx) / xx) / x;
}

/// x log(x / mu) + mu - x, summed as a series when x is close to mu.
inline double poisson_deviance(double x, double mu) {
  if (std::abs(x - mu) < 0.1 * (x + mu)) {
    double v = (x - mu) / (x + mu);
    double s = (x - mu) * v;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / mu) + mu - x;
}

/// log(e^{-mu} mu^n / n!) by the saddle-point expansion, accurate to a few ulp
/// of the deviance even for large n and mu.
inline double log_poisson_pmf(std::size_t n, double mu) {
  if (n == 0) return -mu;
  if (mu == 0.0) return -std::numeric_limits<double>::infinity();
  const double x = static_cast<double>(n);
  return -stirling_error(n) - poisson_deviance(x, mu) - 0.5 * std::log(two_pi * x);
}

/// e^{2 pi i r / N}. Residues are reduced mod N and folded onto [0, N/2] so
/// that unit_root(N, N - r) == conj(unit_root(N, r)) holds bit for bit.
inline std::complex<double> unit_root(std::size_t N, long long r) {
  const auto n = static_cast<long long>(N);
  long long k = r % n;
  if (k < 0) k += n;
  if (k == 0) return {1.0, 0.0};
  if (2 * k == n) return {-1.0, 0.0};
  if (4 * k == n) return {0.0, 1.0};
  if (4 * k == 3 * n) return {0.0, -1.0};
  if (2 * k > n) {
    const double t = two_pi * static_cast<double>(n - k) / static_cast<double>(n);
    return {std::cos(t), -std::sin(t)};
  }
  const double t = two_pi * static_cast<double>(k) / static_cast<double>(n);
  return {std::cos(t), std::sin(t)};
}

/// log(e^a + e^b) without overflow.
inline double log_add_exp(double a, double b) {
  if (a == neg_inf) return b;
  if (b == neg_inf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

/// log(1 + e^x).
inline double log1p_exp(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

/// e^s - 1 for complex s, accurate near s = 0.
inline std::complex<double> expm1(std::complex<double> s) {
  const double x = s.real();
  const double y = s.imag();
  const double half_sin = std::sin(0.5 * y);
  const double re = std::expm1(x) * std::cos(y) - 2.0 * half_sin * half_sin;
  const double im = std::exp(x) * std::sin(y);
  return {re, im};
}

/// exp of a complex log, returning exact zero for a -inf real part.
inline std::complex<double> exp_log(std::complex<double> log_value) {
  if (log_value.real() == neg_inf) return {0.0, 0.0};
  return std::polar(std::exp(log_value.real()), log_value.imag());
}

inline std::complex<double> safe_log(std::complex<double> v) {
  if (v == std::complex<double>{}) return {neg_inf, 0.0};
  return std::log(v);
}

}  // namespace phaseframe::detail
