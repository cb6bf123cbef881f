// SPDX-License-Identifier: Apache-2.0
#include "mimosep/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "mimosep/error.hpp"

namespace mimosep {

namespace {

constexpr int kMaxSweeps = 30;
constexpr double kOffTolerance = 1e-13;
constexpr double kHermitianTolerance = 1e-12;
constexpr double kPhaseTolerance = 1e-10;
constexpr double kClampTolerance = 1e-6;

double off_diagonal_norm(const CMatrix& a) {
  const Eigen::Index n = a.rows();
  double sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != j) sum += std::norm(a(i, j));
    }
  }
  return std::sqrt(sum);
}

void require_hermitian(const CMatrix& a) {
  if (a.rows() != a.cols()) {
    std::ostringstream msg;
    msg << "expected a square matrix, got " << a.rows() << "x" << a.cols();
    throw Error(ErrorKind::Shape, msg.str());
  }
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double defect = hermitian_defect(a);
  if (defect > kHermitianTolerance * scale) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian (max defect " << defect << ")";
    throw Error(ErrorKind::Shape, msg.str());
  }
}

// Diagonalizes `a` in place by cyclic-by-row complex Jacobi rotations. When
// `v` is non-null the rotations are accumulated into it (a = v d v^H).
void jacobi(CMatrix& a, CMatrix* v) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = a(i, i).real();

  const double target = kOffTolerance * a.norm();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) return;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const cd apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;

        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        double t;
        if (std::abs(tau) > 1e150) {
          t = 0.5 / tau;
        } else {
          t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cd phase = apq / mag;
        const cd s_plus = s * phase;             // G(p, q)
        const cd s_minus = s * std::conj(phase);  // -G(q, p)

        cd* col_p = a.col(p).data();
        cd* col_q = a.col(q).data();
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const cd akp = col_p[k];
          const cd akq = col_q[k];
          col_p[k] = c * akp - s_minus * akq;
          col_q[k] = s_plus * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          a(p, k) = std::conj(col_p[k]);
          a(q, k) = std::conj(col_q[k]);
        }
        a(p, p) = app - t * mag;
        a(q, q) = aqq + t * mag;
        a(p, q) = 0.0;
        a(q, p) = 0.0;

        if (v != nullptr) {
          cd* vp = v->col(p).data();
          cd* vq = v->col(q).data();
          for (Eigen::Index k = 0; k < n; ++k) {
            const cd vkp = vp[k];
            const cd vkq = vq[k];
            vp[k] = c * vkp - s_minus * vkq;
            vq[k] = s_plus * vkp + c * vkq;
          }
        }
      }
    }
  }
  const double off = off_diagonal_norm(a);
  if (off > target) {
    std::ostringstream msg;
    msg << "Jacobi did not converge in " << kMaxSweeps << " sweeps (off-diagonal norm " << off
        << ", target " << target << ")";
    throw Error(ErrorKind::Convergence, msg.str());
  }
}

std::vector<Eigen::Index> ascending_order(const CMatrix& diagonalized) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(diagonalized.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) {
    return diagonalized(l, l).real() < diagonalized(r, r).real();
  });
  return order;
}

void check_kms_order(std::size_t n, std::size_t minimum) {
  if (n < minimum) {
    std::ostringstream msg;
    msg << "matrix order must be >= " << minimum << ", got " << n;
    throw Error(ErrorKind::Dimension, msg.str());
  }
}

}  // namespace

HermitianToeplitz::HermitianToeplitz(std::vector<cd> autocov) : autocov_(std::move(autocov)) {
  if (autocov_.empty()) throw Error(ErrorKind::Dimension, "autocovariance sequence is empty");
  const cd head = autocov_.front();
  if (!(head.real() > 0.0) || head.imag() != 0.0) {
    throw Error(ErrorKind::Domain, "autocov(0) must be real and positive");
  }
}

KmsModel::KmsModel(cd rho) : rho_(rho) {
  if (!std::isfinite(rho.real()) || !std::isfinite(rho.imag()) || !(std::abs(rho) < 1.0)) {
    std::ostringstream msg;
    msg << "KMS correlation needs |rho| < 1, got |rho| = " << std::abs(rho);
    throw Error(ErrorKind::InvalidCorrelation, msg.str());
  }
}

HermitianToeplitz kms_covariance(const KmsModel& model, std::size_t n) {
  check_kms_order(n, 1);
  std::vector<cd> seq(n);
  seq[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) seq[k] = seq[k - 1] * model.rho();
  return HermitianToeplitz(std::move(seq));
}

CMatrix materialize(const HermitianToeplitz& t) {
  const auto n = static_cast<Eigen::Index>(t.order());
  const auto& seq = t.autocov();
  CMatrix m(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    m(col, col) = seq[0];
    for (Eigen::Index row = 0; row < col; ++row) {
      m(row, col) = seq[static_cast<std::size_t>(col - row)];
      m(col, row) = std::conj(m(row, col));
    }
  }
  return m;
}

double hermitian_defect(const CMatrix& a) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i <= j && i < a.rows(); ++i) {
      worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
    }
  }
  return worst;
}

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

EigenSystem hermitian_eig(const CMatrix& a) {
  require_hermitian(a);
  const Eigen::Index n = a.rows();
  CMatrix work = hermitian_part(a);
  CMatrix vectors = CMatrix::Identity(n, n);
  jacobi(work, &vectors);

  const auto order = ascending_order(work);
  EigenSystem out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    out.values(j) = work(src, src).real();
    CVector column = vectors.col(src);
    column.normalize();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mag = std::abs(column(i));
      if (mag > kPhaseTolerance) {
        column *= std::conj(column(i)) / mag;
        column(i) = mag;
        break;
      }
    }
    out.basis.col(j) = column;
  }
  return out;
}

RVector hermitian_eigenvalues(const CMatrix& a) {
  require_hermitian(a);
  CMatrix work = hermitian_part(a);
  jacobi(work, nullptr);
  const auto order = ascending_order(work);
  RVector values(a.rows());
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    values(j) = work(src, src).real();
  }
  return values;
}

CMatrix kms_inverse(const KmsModel& model, std::size_t n) {
  check_kms_order(n, 2);
  const cd rho = model.rho();
  const double r2 = std::norm(rho);
  const auto size = static_cast<Eigen::Index>(n);
  CMatrix inv = CMatrix::Zero(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    inv(i, i) = (i == 0 || i == size - 1) ? 1.0 : 1.0 + r2;
    if (i + 1 < size) {
      inv(i, i + 1) = -rho;
      inv(i + 1, i) = -std::conj(rho);
    }
  }
  return inv / (1.0 - r2);
}

std::vector<double> kms_eigenvalues_analytic(const KmsModel& model, std::size_t n) {
  check_kms_order(n, 1);
  const double r = model.magnitude();
  if (!(r > 0.0)) {
    throw Error(ErrorKind::Domain, "analytic KMS eigenvalues need 0 < |rho|; rho = 0 is the identity");
  }
  // sin((n+1)t) + 2r sin(n t) + r^2 sin((n-1)t), divided by sin(t). In terms
  // of x = cos(t) this is U_n(x) + 2r U_{n-1}(x) + r^2 U_{n-2}(x), which has
  // no spurious zeros at t = 0 or t = pi.
  auto characteristic = [n, r](double theta) {
    const double x = std::cos(theta);
    double u_prev = 0.0;  // U_{k-1}
    double u_cur = 1.0;   // U_k
    for (std::size_t k = 0; k < n; ++k) {
      const double next = 2.0 * x * u_cur - u_prev;
      u_prev = u_cur;
      u_cur = next;
    }
    const double u_nm2 = 2.0 * x * u_prev - u_cur;
    return u_cur + 2.0 * r * u_prev + r * r * u_nm2;
  };

  const std::size_t brackets = 4 * n;
  const double width = std::numbers::pi / static_cast<double>(brackets);
  std::vector<double> roots;
  roots.reserve(n);
  double lo = 0.0;
  double f_lo = characteristic(lo);
  for (std::size_t b = 1; b <= brackets; ++b) {
    double hi = (b == brackets) ? std::numbers::pi : static_cast<double>(b) * width;
    double f_hi = characteristic(hi);
    if (f_hi == 0.0) {
      roots.push_back(hi);
    } else if (f_lo != 0.0 && (f_lo < 0.0) != (f_hi < 0.0)) {
      double a = lo, fa = f_lo, c = hi;
      while (c - a > 1e-12) {
        const double mid = 0.5 * (a + c);
        const double fm = characteristic(mid);
        if (fm == 0.0) {
          a = c = mid;
          break;
        }
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          c = mid;
        }
      }
      roots.push_back(0.5 * (a + c));
    }
    lo = hi;
    f_lo = f_hi;
  }
  if (roots.size() != n) {
    std::ostringstream msg;
    msg << "KMS root bracketing found " << roots.size() << " of " << n
        << " roots on (0, pi) with bracket width " << width;
    throw Error(ErrorKind::Numerical, msg.str());
  }

  std::vector<double> values(n);
  const double r2 = r * r;
  std::transform(roots.begin(), roots.end(), values.begin(), [&](double theta) {
    return (1.0 - r2) / (1.0 + r2 + 2.0 * r * std::cos(theta));
  });
  std::sort(values.begin(), values.end());
  return values;
}

double psd_eval(const KmsModel& model, double omega) {
  const double r2 = std::norm(model.rho());
  const double re = (model.rho() * std::polar(1.0, omega)).real();
  return (1.0 - r2) / (1.0 + r2 - 2.0 * re);
}

double psd_eval(const HermitianToeplitz& t, double omega) {
  // Same DTFT convention as the KMS closed form: s(w) = sum_k c(k) e^{-jkw}
  // with c(k) the first column, i.e. c(k) = conj(autocov(k)) for k > 0.
  const auto& seq = t.autocov();
  double value = seq[0].real();
  for (std::size_t k = 1; k < seq.size(); ++k) {
    value += 2.0 * (seq[k] * std::polar(1.0, static_cast<double>(k) * omega)).real();
  }
  if (!(value > 0.0)) {
    std::ostringstream msg;
    msg << "truncated spectral density is " << value << " at omega = " << omega;
    throw Error(ErrorKind::NonpositivePsd, msg.str());
  }
  return value;
}

CMatrix dft_matrix(std::size_t n) {
  check_kms_order(n, 1);
  const auto size = static_cast<Eigen::Index>(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  CMatrix v(size, size);
  for (Eigen::Index m = 0; m < size; ++m) {
    for (Eigen::Index k = 0; k < size; ++k) {
      const auto wrapped = static_cast<double>((static_cast<std::size_t>(m) * static_cast<std::size_t>(k)) % n);
      v(m, k) = std::polar(scale, -2.0 * std::numbers::pi * wrapped / static_cast<double>(n));
    }
  }
  return v;
}

CMatrix hermitian_sqrt(const CMatrix& a) {
  const EigenSystem eig = hermitian_eig(a);
  RVector roots(eig.values.size());
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    const double value = eig.values(i);
    if (value < -kClampTolerance) {
      std::ostringstream msg;
      msg << "matrix is not positive semidefinite (eigenvalue " << value << ")";
      throw Error(ErrorKind::Domain, msg.str());
    }
    roots(i) = std::sqrt(std::max(value, 0.0));
  }
  return hermitian_part(eig.basis * roots.asDiagonal() * eig.basis.adjoint());
}

}  // namespace mimosep
