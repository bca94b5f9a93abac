#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <complex>
#include <stdexcept>

namespace satqkd {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

namespace math {

inline Mat hermitize(const Mat& m) { return 0.5 * (m + m.adjoint()); }

inline bool is_hermitian(const Mat& m, double tol = 1e-12) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline Eigen::SelfAdjointEigenSolver<Mat> herm_eig(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("herm_eig: eigendecomposition failed");
  return es;
}

inline RVec herm_eigvals(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("herm_eigvals: eigendecomposition failed");
  return es.eigenvalues();
}

// Hermitian square root with small negative eigenvalues (quadrature noise)
// clipped to zero. Inputs that are clearly not PSD are rejected.
inline Mat herm_sqrt_psd(const Mat& m, double neg_tol = 1e-10) {
  auto es = herm_eig(m);
  RVec ev = es.eigenvalues();
  const double scale = std::max(1.0, std::abs(ev.maxCoeff()));
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -neg_tol * scale && ev[i] < -1e-8)
      throw std::invalid_argument("herm_sqrt_psd: matrix is not PSD");
    ev[i] = ev[i] > 0.0 ? std::sqrt(ev[i]) : 0.0;
  }
  return es.eigenvectors() * ev.asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace math

// Base-2 logarithm of a Hermitian PSD matrix with eigenvalues clipped below
// `floor` before the log; reconstructed in the eigenbasis of the input.
inline Mat hermitian_log2(const Mat& m, double floor_value = 1e-12) {
  if (!math::is_hermitian(m, 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff())))
    throw std::invalid_argument("hermitian_log2: input is not Hermitian");
  auto es = math::herm_eig(math::hermitize(m));
  RVec ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    ev[i] = std::log2(std::max(ev[i], floor_value));
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

namespace math {

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Trace over the second factor of A (dim_a) tensor B (dim_b).
inline Mat partial_trace_b(const Mat& m, int dim_a, int dim_b) {
  Mat out = Mat::Zero(dim_a, dim_a);
  for (int i = 0; i < dim_a; ++i)
    for (int j = 0; j < dim_a; ++j)
      for (int k = 0; k < dim_b; ++k)
        out(i, j) += m(i * dim_b + k, j * dim_b + k);
  return out;
}

inline Mat partial_trace_a(const Mat& m, int dim_a, int dim_b) {
  Mat out = Mat::Zero(dim_b, dim_b);
  for (int k = 0; k < dim_a; ++k)
    out += m.block(k * dim_b, k * dim_b, dim_b, dim_b);
  return out;
}

// Real Hilbert-Schmidt inner product Re Tr(A^dag B).
inline double hs_inner(const Mat& a, const Mat& b) {
  return a.cwiseProduct(b.conjugate()).sum().real();
}

}  // namespace math
}  // namespace satqkd
