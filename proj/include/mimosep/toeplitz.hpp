// SPDX-License-Identifier: Apache-2.0
//
// Covariance models and the dense Hermitian machinery built on them.
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace mimosep {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Hermitian Toeplitz matrix stored by its autocovariance sequence.
///
/// `autocov()[k]` is the entry on the k-th superdiagonal, so the materialized
/// matrix has M(m, n) = autocov[n - m] for m <= n and the conjugate mirror
/// below the diagonal. The order equals the sequence length.
class HermitianToeplitz {
 public:
  explicit HermitianToeplitz(std::vector<cd> autocov);

  std::size_t order() const noexcept { return autocov_.size(); }
  const std::vector<cd>& autocov() const noexcept { return autocov_; }

 private:
  std::vector<cd> autocov_;
};

/// Single-parameter exponential (Kac-Murdock-Szego) correlation, |rho| < 1.
class KmsModel {
 public:
  explicit KmsModel(cd rho);

  cd rho() const noexcept { return rho_; }
  double magnitude() const noexcept { return std::abs(rho_); }

 private:
  cd rho_;
};

/// Ascending eigenvalues with matching unit-norm eigenvector columns.
struct EigenSystem {
  RVector values;
  CMatrix basis;
};

HermitianToeplitz kms_covariance(const KmsModel& model, std::size_t n);

CMatrix materialize(const HermitianToeplitz& t);

/// Cyclic-by-row complex Jacobi. Output is deterministic: fixed sweep order,
/// stable ascending sort, and each eigenvector is rotated so that its first
/// non-negligible component is real and positive.
EigenSystem hermitian_eig(const CMatrix& a);

/// Same iteration as hermitian_eig without accumulating eigenvectors.
RVector hermitian_eigenvalues(const CMatrix& a);

/// Tridiagonal closed-form inverse of the KMS matrix (n >= 2).
CMatrix kms_inverse(const KmsModel& model, std::size_t n);

/// KMS eigenvalues (1-r^2)/(1+r^2+2r cos(theta_k)) from the roots of the
/// characteristic trigonometric equation, found by bisection. Requires r > 0.
std::vector<double> kms_eigenvalues_analytic(const KmsModel& model, std::size_t n);

/// Power spectral density (Toeplitz symbol) at omega.
///
/// The general path sums the stored sequence only; it throws NonpositivePsd
/// if the truncated symbol is not strictly positive.
double psd_eval(const HermitianToeplitz& t, double omega);
double psd_eval(const KmsModel& model, double omega);

/// Normalized DFT matrix, entry (m, k) = exp(-j 2 pi m k / n) / sqrt(n).
CMatrix dft_matrix(std::size_t n);

/// Hermitian PSD square root. Eigenvalues in [-1e-6, 0) are clamped to zero;
/// anything more negative is rejected.
CMatrix hermitian_sqrt(const CMatrix& a);

/// Largest |a(m,n) - conj(a(n,m))| over the matrix.
double hermitian_defect(const CMatrix& a);

/// (a + a^H) / 2.
CMatrix hermitian_part(const CMatrix& a);

}  // namespace mimosep
