// oracle.hpp
// Brute-force reference implementations. Everything here is built from the
// coherent-state amplitudes and dense linear algebra only, never from the
// closed-form spectral formulas, so the fast paths can be checked against it.

#pragma once

#include <Eigen/Dense>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "phaseframe/error.hpp"
#include "phaseframe/fock.hpp"
#include "phaseframe/spectral.hpp"

namespace phaseframe::oracle {

using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Default column cap for the dense frame.
inline constexpr std::size_t max_default_columns = 2000;
/// Hard limits beyond which the oracle refuses to run.
inline constexpr std::size_t max_frame_rows = 512;
inline constexpr std::size_t max_frame_columns = 20000;
inline constexpr std::size_t max_eig_check_size = 128;

/// T_{kn} = <z_k|n> for k < N, n <= n_max.
class DenseFrame {
 public:
  explicit DenseFrame(PhaseGrid grid, std::optional<std::size_t> n_max = std::nullopt)
      : grid_(grid) {
    const std::size_t N = grid.N();
    n_max_ = n_max.value_or(
        std::min(phaseframe::detail::default_depth(grid.p(), N), max_default_columns));
    if (N > max_frame_rows || n_max_ + 1 > max_frame_columns)
      throw size_limit_error("DenseFrame: " + std::to_string(N) + " x " +
                             std::to_string(n_max_ + 1) + " exceeds the oracle size limits (" +
                             std::to_string(max_frame_rows) + " x " +
                             std::to_string(max_frame_columns) + ")");
    T_.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(n_max_ + 1));
    for (std::size_t k = 0; k < N; ++k) {
      const auto zk = grid.point(k);
      for (std::size_t n = 0; n <= n_max_; ++n)
        T_(idx(k), idx(n)) = std::conj(coherent_amplitude(n, zk));
    }
  }

  const PhaseGrid& grid() const noexcept { return grid_; }
  std::size_t n_max() const noexcept { return n_max_; }
  const Matrix& T() const noexcept { return T_; }

  /// B = T T*, assembled densely.
  Matrix gram() const { return T_ * T_.adjoint(); }

  Vector padded(const FockVector& psi) const {
    if (psi.size() > n_max_ + 1)
      throw std::invalid_argument("DenseFrame: state has " + std::to_string(psi.size()) +
                                  " coefficients, frame only " + std::to_string(n_max_ + 1));
    Vector a = Vector::Zero(static_cast<Eigen::Index>(n_max_ + 1));
    for (std::size_t n = 0; n < psi.size(); ++n) a(idx(n)) = psi[n];
    return a;
  }

  static Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

 private:
  PhaseGrid grid_;
  std::size_t n_max_ = 0;
  Matrix T_;
};

namespace detail {

inline FockVector to_fock(const Vector& v) {
  std::vector<complex> c(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) c[static_cast<std::size_t>(i)] = v(i);
  return FockVector(std::move(c));
}

/// Solves B c = v for the Hermitian positive-definite Gram matrix: Cholesky
/// first, dense eigendecomposition if the factorization breaks down.
inline Vector solve_gram(const Matrix& B, const Vector& v, Diagnostics* diag) {
  Eigen::LLT<Matrix> llt(B);
  if (llt.info() == Eigen::Success) {
    const double rcond = llt.rcond();
    if (!(rcond > 1e-16))
      throw conditioning_error("dense Gram solve: matrix numerically singular", 1.0 / rcond);
    Vector c = llt.solve(v);
    const double vn = v.norm();
    const double res = (B * c - v).norm();
    if (vn > 0.0 && res > 1e-10 * vn)
      warn(diag, "dense Gram solve: residual " + std::to_string(res / vn) +
                     " relative, condition estimate " + std::to_string(1.0 / rcond));
    return c;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(B);
  const auto& w = eig.eigenvalues();
  if (eig.info() != Eigen::Success || !(w.minCoeff() > 0.0))
    throw conditioning_error("dense Gram solve: matrix is not positive definite",
                             w.maxCoeff() / std::max(w.minCoeff(), 1e-300));
  warn(diag, "dense Gram solve: Cholesky failed, used eigendecomposition");
  const Matrix& V = eig.eigenvectors();
  Vector y = V.adjoint() * v;
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) /= w(i);
  return V * y;
}

}  // namespace detail

/// Orthogonal projection of psi onto span{|z_k>}: solves B c = T a and returns T* c.
inline FockVector dense_project(const DenseFrame& frame, const FockVector& psi,
                                Diagnostics* diag = nullptr) {
  const Vector a = frame.padded(psi);
  const Vector v = frame.T() * a;
  const Vector c = detail::solve_gram(frame.gram(), v, diag);
  return detail::to_fock(frame.T().adjoint() * c);
}

/// The full projector T* B^{-1} T on H_{n_max}.
inline Matrix dense_projector(const DenseFrame& frame) {
  Eigen::LLT<Matrix> llt(frame.gram());
  if (llt.info() != Eigen::Success)
    throw conditioning_error("dense_projector: Gram matrix not positive definite", 0.0);
  return frame.T().adjoint() * llt.solve(frame.T());
}

/// Least-squares solution of sum_m T_{km} a_m = Psi_k over H_M by Householder QR.
inline FockVector dense_pseudoinverse_fit(const DenseFrame& frame, std::size_t M,
                                          const SampleSet& samples) {
  if (!(frame.grid() == samples.grid()))
    throw grid_mismatch("dense_pseudoinverse_fit: samples taken on a different grid");
  const std::size_t N = frame.grid().N();
  if (M >= N) throw std::invalid_argument("dense_pseudoinverse_fit: need M < N");
  if (M > frame.n_max()) throw std::invalid_argument("dense_pseudoinverse_fit: M beyond frame");
  const Matrix A = frame.T().leftCols(DenseFrame::idx(M + 1));
  Vector b(DenseFrame::idx(N));
  for (std::size_t k = 0; k < N; ++k) b(DenseFrame::idx(k)) = samples[k];
  Eigen::ColPivHouseholderQR<Matrix> qr(A);
  if (qr.rank() != DenseFrame::idx(M + 1))
    throw conditioning_error("dense_pseudoinverse_fit: rank-deficient frame matrix",
                             std::abs(qr.maxPivot()));
  return detail::to_fock(qr.solve(b));
}

/// Trapezoid rule with Q nodes for
///   a_n = sqrt(n! / (p^n e^{-p})) (1/2pi) int e^{i n theta} Psi(sqrt(p) e^{i theta}) d theta.
/// Exact once Q exceeds every frequency difference, i.e. Q > max(n, len(psi) - 1).
inline complex quadrature_coefficient(const FockVector& psi, std::size_t n, double p,
                                      std::size_t Q) {
  if (!(p > 0.0)) throw std::invalid_argument("quadrature_coefficient: p must be positive");
  if (Q <= std::max(n, psi.max_index()))
    throw std::invalid_argument("quadrature_coefficient: Q = " + std::to_string(Q) +
                                " does not resolve the bandwidth (need Q > " +
                                std::to_string(std::max(n, psi.max_index())) + ")");
  complex sum{};
  for (std::size_t k = 0; k < Q; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(Q);
    const auto z = CoherentPoint::from_polar(p, theta);
    sum += std::polar(1.0, static_cast<double>(n) * theta) * evaluate(psi, z);
  }
  const double nd = static_cast<double>(n);
  const double scale = std::exp(0.5 * (std::lgamma(nd + 1.0) - nd * std::log(p) + p));
  return scale * sum / static_cast<double>(Q);
}

/// max_j |B f_j - lambda_hat_j f_j| with B assembled densely from its first row.
inline double dense_eig_check(const CirculantOverlap& B) {
  const std::size_t N = B.N();
  if (N > max_eig_check_size)
    throw size_limit_error("dense_eig_check: N = " + std::to_string(N) + " exceeds " +
                           std::to_string(max_eig_check_size));
  Matrix dense(DenseFrame::idx(N), DenseFrame::idx(N));
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t l = 0; l < N; ++l) dense(DenseFrame::idx(k), DenseFrame::idx(l)) = B.entry(k, l);
  const auto eig = B.eigenvalues();
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  double dev = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    Vector f(DenseFrame::idx(N));
    for (std::size_t k = 0; k < N; ++k) {
      const double t = -2.0 * std::numbers::pi * static_cast<double>((k * j) % N) /
                       static_cast<double>(N);
      f(DenseFrame::idx(k)) = std::polar(scale, t);
    }
    const Vector r = dense * f - eig[j] * f;
    dev = std::max(dev, r.cwiseAbs().maxCoeff());
  }
  return dev;
}

/// Below this reciprocal condition estimate of the Gram matrix, projection_error
/// switches to extended precision.
inline constexpr double extended_precision_rcond = 1e-8;

namespace detail {

using mp_real = boost::multiprecision::cpp_bin_float_100;

struct mp_complex {
  mp_real re, im;
};

inline mp_complex mul(const mp_complex& a, const mp_complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline mp_complex mul_conj(const mp_complex& a, const mp_complex& b) {  // a conj(b)
  return {a.re * b.re + a.im * b.im, a.im * b.re - a.re * b.im};
}

/// ||psi - P_S psi||^2 / ||psi||^2 with every step carried out at 100 digits:
/// the amplitudes by recurrence, B = T T* by dense summation, a hand-written
/// Cholesky solve. Used when B is too ill-conditioned for double precision.
inline double extended_projection_error2(const PhaseGrid& grid, const FockVector& psi,
                                         std::size_t n_max) {
  const std::size_t N = grid.N();
  const std::size_t D = n_max + 1;
  const mp_real p = grid.p();
  const mp_real radius = sqrt(p);
  const mp_real two_pi = 2 * boost::math::constants::pi<mp_real>();

  // T[k][n] = conj(U_n(z_k)).
  std::vector<std::vector<mp_complex>> T(N, std::vector<mp_complex>(D));
  const mp_real u0 = exp(-p / 2);
  for (std::size_t k = 0; k < N; ++k) {
    const mp_real t = two_pi * k / N;
    const mp_complex z{radius * cos(t), radius * sin(t)};
    mp_complex u{u0, 0};
    for (std::size_t n = 0; n < D; ++n) {
      T[k][n] = {u.re, -u.im};
      u = mul(u, z);
      const mp_real s = sqrt(mp_real(n + 1));
      u.re /= s;
      u.im /= s;
    }
  }

  std::vector<mp_complex> a(D);
  mp_real norm2 = 0;
  for (std::size_t n = 0; n < psi.size(); ++n) {
    a[n] = {psi[n].real(), psi[n].imag()};
    norm2 += a[n].re * a[n].re + a[n].im * a[n].im;
  }

  // v = T a, B = T T*.
  std::vector<mp_complex> v(N);
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t n = 0; n < psi.size(); ++n) {
      const auto t = mul(T[k][n], a[n]);
      v[k].re += t.re;
      v[k].im += t.im;
    }
  std::vector<std::vector<mp_complex>> B(N, std::vector<mp_complex>(N));
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t l = 0; l <= k; ++l) {
      mp_complex s{0, 0};
      for (std::size_t n = 0; n < D; ++n) {
        const auto t = mul_conj(T[k][n], T[l][n]);
        s.re += t.re;
        s.im += t.im;
      }
      B[k][l] = s;
      B[l][k] = {s.re, -s.im};
    }

  // B = L L*.
  std::vector<std::vector<mp_complex>> L(N, std::vector<mp_complex>(N));
  for (std::size_t j = 0; j < N; ++j) {
    mp_real d = B[j][j].re;
    for (std::size_t i = 0; i < j; ++i) d -= L[j][i].re * L[j][i].re + L[j][i].im * L[j][i].im;
    if (!(d > 0))
      throw conditioning_error("extended Gram solve: matrix not positive definite", 0.0);
    const mp_real ljj = sqrt(d);
    L[j][j] = {ljj, 0};
    for (std::size_t r = j + 1; r < N; ++r) {
      mp_complex s = B[r][j];
      for (std::size_t i = 0; i < j; ++i) {
        const auto t = mul_conj(L[r][i], L[j][i]);
        s.re -= t.re;
        s.im -= t.im;
      }
      L[r][j] = {s.re / ljj, s.im / ljj};
    }
  }
  std::vector<mp_complex> y(N), c(N);
  for (std::size_t r = 0; r < N; ++r) {
    mp_complex s = v[r];
    for (std::size_t i = 0; i < r; ++i) {
      const auto t = mul(L[r][i], y[i]);
      s.re -= t.re;
      s.im -= t.im;
    }
    y[r] = {s.re / L[r][r].re, s.im / L[r][r].re};
  }
  for (std::size_t r = N; r-- > 0;) {
    mp_complex s = y[r];
    for (std::size_t i = r + 1; i < N; ++i) {
      const auto t = mul_conj(c[i], L[i][r]);  // conj(L[i][r]) c[i]
      s.re -= t.re;
      s.im -= t.im;
    }
    c[r] = {s.re / L[r][r].re, s.im / L[r][r].re};
  }

  // residual a - T* c
  mp_real res2 = 0;
  for (std::size_t n = 0; n < D; ++n) {
    mp_complex s = a[n];
    for (std::size_t k = 0; k < N; ++k) {
      const auto t = mul_conj(c[k], T[k][n]);  // conj(T[k][n]) c[k]
      s.re -= t.re;
      s.im -= t.im;
    }
    res2 += s.re * s.re + s.im * s.im;
  }
  return static_cast<double>(res2 / norm2);
}

}  // namespace detail

/// ||psi - P_S psi|| / ||psi|| with P_S from the dense Gram solve. Gram
/// matrices too ill-conditioned for double precision are redone at 100 digits.
inline double projection_error(const DenseFrame& frame, const FockVector& psi,
                               Diagnostics* diag = nullptr) {
  const double nrm = psi.norm();
  if (nrm == 0.0) throw std::invalid_argument("projection_error: zero state");
  const Vector a = frame.padded(psi);
  const Matrix B = frame.gram();
  Eigen::LLT<Matrix> llt(B);
  if (llt.info() != Eigen::Success || !(llt.rcond() > extended_precision_rcond))
    return std::sqrt(detail::extended_projection_error2(frame.grid(), psi, frame.n_max()));
  const Vector v = frame.T() * a;
  const Vector c = detail::solve_gram(B, v, diag);
  const Vector r = a - frame.T().adjoint() * c;
  return r.norm() / nrm;
}

}  // namespace phaseframe::oracle
