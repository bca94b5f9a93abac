#pragma once

// Truncated Fock-space operator algebra: quadratures, coherent states,
// QPSK Gram matrices and the heterodyne/homodyne measurement operators.
// Everything lives in the number basis |0..N_c> as dense complex matrices
// of dimension N_c+1.
//
// Shot-noise-unit convention used throughout the library:
//   q = (a + a^dag)/sqrt(2),  p = (a - a^dag)/(i sqrt(2)),
// so the vacuum quadrature variance is 1/2.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

#include "satqkd/math/linalg.hpp"
#include "satqkd/math/quadrature.hpp"
#include "satqkd/math/special.hpp"

namespace satqkd::fock {

inline void check_cutoff(int n_c, int min_value = 1) {
  if (n_c < min_value)
    throw std::invalid_argument("photon-number cutoff N_c must be >= " +
                                std::to_string(min_value));
}

inline Mat annihilation(int n_c) {
  check_cutoff(n_c);
  Mat a = Mat::Zero(n_c + 1, n_c + 1);
  for (int n = 1; n <= n_c; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

inline Mat creation(int n_c) { return annihilation(n_c).adjoint(); }

// (q, p) in shot-noise units; both Hermitian.
inline std::pair<Mat, Mat> quadratures(int n_c) {
  check_cutoff(n_c);
  const Mat a = annihilation(n_c);
  const Mat ad = a.adjoint();
  const Mat q = (a + ad) / std::sqrt(2.0);
  const Mat p = (a - ad) / (cxd(0.0, 1.0) * std::sqrt(2.0));
  return {q, p};
}

// n = (q^2 + p^2 - 1)/2 and d = q^2 - p^2, assembled from the *truncated*
// q, p products so that constraint operators and observables live in the
// same truncated algebra (the top diagonal entry of n deviates from N_c).
inline std::pair<Mat, Mat> second_moment_ops(int n_c) {
  check_cutoff(n_c, 2);
  const auto [q, p] = quadratures(n_c);
  const Mat q2 = q * q, p2 = p * p;
  const Mat n = 0.5 * (q2 + p2 - Mat::Identity(n_c + 1, n_c + 1));
  const Mat d = q2 - p2;
  return {n, d};
}

// |alpha> truncated at N_c: amplitudes e^{-|a|^2/2} a^n / sqrt(n!).
// The ket is sub-normalized; the tail mass vanishes as N_c grows.
inline Vec coherent_ket(cxd alpha, int n_c) {
  check_cutoff(n_c);
  Vec ket(n_c + 1);
  ket[0] = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n <= n_c; ++n) ket[n] = ket[n - 1] * alpha / std::sqrt(double(n));
  return ket;
}

// The four QPSK amplitudes alpha e^{i(2k+1)pi/4}, k = 0..3.
inline std::array<cxd, 4> qpsk_amplitudes(double alpha) {
  std::array<cxd, 4> out;
  for (int k = 0; k < 4; ++k) {
    const double phase = (2.0 * k + 1.0) * M_PI / 4.0;
    out[k] = alpha * std::exp(cxd(0.0, phase));
  }
  return out;
}

// Exact (untruncated) Gram matrix of the QPSK constellation,
// <phi_j|phi_i> = exp(-alpha^2 + alpha^2 e^{i(i-j)pi/2}).
inline Eigen::Matrix4cd qpsk_gram(double alpha) {
  if (alpha < 0.0)
    throw std::invalid_argument("qpsk_gram: amplitude must be >= 0");
  Eigen::Matrix4cd g;
  const double a2 = alpha * alpha;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const cxd rot = std::exp(cxd(0.0, (i - j) * M_PI / 2.0));
      g(i, j) = std::exp(-a2 + a2 * rot);
    }
  return g;
}

// Heterodyne region operator R_z for quadrant z with amplitude cut Delta_a
// and phase cut Delta_p:
//   <m|R_z|n> = (1/pi) * A_mn * G_mn,
//   A_mn = integral of e^{i(m-n)t} over [z pi/2 + Delta_p, (z+1) pi/2 - Delta_p],
//   G_mn = Gamma((m+n)/2 + 1, Delta_a^2) / (2 sqrt(m! n!)).
inline Mat region_operator(int z, double delta_a, double delta_p, int n_c) {
  check_cutoff(n_c);
  if (z < 0 || z > 3) throw std::invalid_argument("region_operator: z must be 0..3");
  if (delta_a < 0.0)
    throw std::invalid_argument("region_operator: Delta_a must be >= 0");
  if (delta_p < 0.0 || delta_p >= M_PI / 4.0)
    throw std::invalid_argument(
        "region_operator: Delta_p must lie in [0, pi/4)");

  const double t0 = z * M_PI / 2.0 + delta_p;
  const double t1 = (z + 1) * M_PI / 2.0 - delta_p;
  const double x = delta_a * delta_a;
  Mat r(n_c + 1, n_c + 1);
  for (int m = 0; m <= n_c; ++m) {
    for (int n = 0; n <= m; ++n) {
      cxd ang;
      if (m == n) {
        ang = t1 - t0;
      } else {
        const cxd ik(0.0, double(m - n));
        ang = (std::exp(ik * t1) - std::exp(ik * t0)) / ik;
      }
      const double s = 0.5 * (m + n) + 1.0;
      const double radial =
          0.5 * std::exp(math::ln_gamma_upper(s, x) -
                         0.5 * (math::ln_factorial(m) + math::ln_factorial(n)));
      r(m, n) = ang * radial / M_PI;
      r(n, m) = std::conj(r(m, n));
    }
  }
  return r;
}

namespace detail {

// Hermite-Gaussian eigenfunctions of q (vacuum variance 1/2), evaluated by
// the stable normalized recurrence.
inline double hermite_gaussian(int n, double t) {
  double psi_prev = std::pow(M_PI, -0.25) * std::exp(-0.5 * t * t);
  if (n == 0) return psi_prev;
  double psi = std::sqrt(2.0) * t * psi_prev;
  for (int k = 1; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1.0)) * t * psi -
                        std::sqrt(double(k) / (k + 1.0)) * psi_prev;
    psi_prev = psi;
    psi = next;
  }
  return psi;
}

}  // namespace detail

// Homodyne interval operators for the q quadrature:
//   <m|I0|n> = int_{Delta_c}^{inf} psi_m psi_n,
//   <m|I1|n> = int_{-inf}^{-Delta_c} psi_m psi_n,
// by adaptive quadrature. The window is truncated where the Gaussian factor
// has fully decayed.
inline std::pair<Mat, Mat> interval_operators(double delta_c, int n_c) {
  check_cutoff(n_c);
  if (delta_c < 0.0)
    throw std::invalid_argument("interval_operators: Delta_c must be >= 0");

  // classical turning point of the highest mode plus 12 vacuum widths
  const double t_max = delta_c + std::sqrt(2.0 * n_c + 1.0) + 12.0;
  math::QuadratureOptions opt;
  opt.rel_tol = 1e-10;

  Mat i0(n_c + 1, n_c + 1), i1(n_c + 1, n_c + 1);
  for (int m = 0; m <= n_c; ++m) {
    for (int n = 0; n <= m; ++n) {
      const auto prod = [&](double t) {
        return detail::hermite_gaussian(m, t) * detail::hermite_gaussian(n, t);
      };
      i0(m, n) = math::integrate(prod, delta_c, t_max, opt);
      i1(m, n) = math::integrate(prod, -t_max, -delta_c, opt);
      i0(n, m) = i0(m, n);
      i1(n, m) = i1(m, n);
    }
  }
  return {i0, i1};
}

// Diagonal phase rotation e^{i pi n/2} = diag(i^n); conjugating the
// q-interval operators with it yields the p-interval operators.
inline Mat quarter_phase(int n_c) {
  Mat u = Mat::Zero(n_c + 1, n_c + 1);
  cxd w(1.0, 0.0);
  for (int n = 0; n <= n_c; ++n) {
    u(n, n) = w;
    w *= cxd(0.0, 1.0);
  }
  return u;
}

}  // namespace satqkd::fock
