// Samples a displaced coherent state on rings of growing radius and compares
// the filtered reconstruction error with its a priori bound.

#include <cmath>
#include <cstdio>
#include <numbers>

#include "phaseframe/phaseframe.hpp"

using namespace phaseframe;

int main() {
  const std::size_t N = 16;
  const CoherentPoint zeta = CoherentPoint::from_polar(5.0, 0.3);
  const auto psi = coherent_state(zeta, 200);

  std::printf("state |zeta>, |zeta|^2 = %.1f, N = %zu, p0(N) = %.3f\n", zeta.p(), N, p_critical(N));
  std::printf("%8s %14s %14s %14s\n", "p", "eps_N^2", "err^2", "bound");
  for (double p : {2.0, 4.0, 8.0, 12.0, 16.0, 24.0}) {
    const PhaseGrid grid(N, p);
    const PartialReconstructor rec(grid);
    const auto filtered = reconstruct_filtered(rec, sample(psi, grid));
    double err2 = 0.0;
    for (std::size_t n = 0; n < psi.size(); ++n) err2 += std::norm(psi[n] - filtered.at_or_zero(n));
    const double eps = truncation_epsilon(psi, N - 1).value;
    std::printf("%8.1f %14.6e %14.6e %14.6e\n", p, eps * eps, err2, filtered_error_bound(eps, p, N));
  }

  // Off the circle: the partial reconstruction interpolates the samples exactly.
  const PhaseGrid grid(N, 12.0);
  const PartialReconstructor rec(grid);
  const auto s = sample(psi, grid);
  std::printf("\n%8s %26s %26s\n", "|z|^2", "Psi(z)", "reconstructed");
  for (double r2 : {0.0, 6.0, 12.0, 18.0}) {
    const auto z = CoherentPoint::from_polar(r2, 0.25 * std::numbers::pi);
    const complex want = evaluate(psi, z), got = reconstruct_partial(rec, s, z);
    std::printf("%8.1f %12.5e %+12.5ei %12.5e %+12.5ei\n", r2, want.real(), want.imag(), got.real(), got.imag());
  }
}
