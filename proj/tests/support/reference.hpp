// reference.hpp
// Reference values computed independently at 50 significant digits with an
// arbitrary-precision library (direct series summation, no shared code with
// the library under test), plus small comparison helpers.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "phaseframe/fock.hpp"

namespace ref {

inline constexpr double U0_at_1 = 0.60653065971263342360;  // e^{-1/2}

inline constexpr double lambda_p1_N4_m0 = 1.4715177646857693;  // 4/e
inline constexpr double lambda_p500_N1_m700 = 5.5921749527902036072e-18;
inline constexpr double lambda_p1000_N3_m900 = 0.00022550863056377856687;
inline constexpr double lambda_p03_N5_m40 = 5.5193353268060264909e-69;
inline constexpr double U_1000_at_p1000 = 0.11231478686585083717;

inline constexpr std::array<double, 4> lambda_hat_p1_N4 = {
    1.532867503929438573, 1.483784468069611705, 0.737803062543786811, 0.245544965457162911};
inline constexpr std::array<double, 7> lambda_hat_p10_N7 = {
    1.0016428082593249239, 1.0372286986266160318, 1.044782281008560424, 1.0185974040374609801,
    0.97841400208533999459, 0.95449921070293707419, 0.96483559527976057135};
inline constexpr std::array<double, 8> nu_p5_N8 = {
    9.6954130393940634948,    1.076886780361656288,     0.21533922276987227482,
    0.058723405277573755821,  0.019573464924088519404,  0.0075280351905739064688,
    0.0032262449425927725623, 0.001505565107629276192};

inline constexpr double nu0_p05_N1 = 0.6487212707001281468;  // e^{1/2} - 1
inline constexpr double nu0_p1_N10 = 2.7557319224026994e-7;
inline constexpr double inv_factorial_10 = 2.7557319223985891e-7;

inline constexpr double C1_N2_p1 = 0.1353352832366127;  // e^{-2}

inline constexpr double p0_N5 = 7.8725668540707032535;
inline constexpr double p0_N10 = 15.227764732987044549;
inline constexpr double p0_N20 = 29.941670210823717787;
inline constexpr double p0_N100 = 147.66203517302963;

inline constexpr double erlang_M20_p15 = 0.041810305001064590597;
inline constexpr double droplet_M100_p50 = 0.99999999984302540276;
inline constexpr double droplet_M100_p101 = 0.48676720808145487351;

inline constexpr double eps2_p80_N100 = 0.017108313035133114166;
inline constexpr double eps2_p120_N100 = 0.97213626010947933852;
inline constexpr double eps2_p2_N16 = 4.7996827572653578916e-10;

inline constexpr double lagrange_L0_at_0_N8_p4 = 0.35177912577373714473;

inline constexpr double error_bound_eps0_p1_N10 = 2.755731162997066e-7;

inline double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

inline double rel(std::complex<double> got, std::complex<double> want) {
  return std::abs(got - want) / std::abs(want);
}

inline double max_abs_diff(const phaseframe::FockVector& a, const phaseframe::FockVector& b) {
  double d = 0.0;
  for (std::size_t n = 0; n < std::max(a.size(), b.size()); ++n)
    d = std::max(d, std::abs(a.at_or_zero(n) - b.at_or_zero(n)));
  return d;
}

inline double max_abs(const phaseframe::FockVector& a) {
  double m = 0.0;
  for (const auto& x : a.coefficients()) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace ref
