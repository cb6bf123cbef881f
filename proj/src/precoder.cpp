// SPDX-License-Identifier: Apache-2.0
#include "mimosep/precoder.hpp"

#include <cmath>
#include <sstream>

#include "mimosep/error.hpp"

namespace mimosep {

namespace {

constexpr double kTraceTolerance = 1e-12;
constexpr double kRankTolerance = 1e-12;
constexpr double kConditionFloor = 1e-10;

// Ascending eigenvalues of a covariance that must be well conditioned.
EigenSystem definite_eig(const CMatrix& sigma) {
  EigenSystem eig = hermitian_eig(sigma);
  const double low = eig.values(0);
  const double high = eig.values(eig.values.size() - 1);
  if (!(low > 0.0) || low < kConditionFloor * high) {
    std::ostringstream msg;
    msg << "covariance is not positive definite enough (eigenvalues " << low << " .. " << high << ")";
    throw Error(ErrorKind::Domain, msg.str());
  }
  return eig;
}

double inverse_root_sum(const RVector& values) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < values.size(); ++k) sum += 1.0 / std::sqrt(values(k));
  return sum;
}

}  // namespace

std::string_view to_string(PrecoderLabel label) noexcept {
  switch (label) {
    case PrecoderLabel::Optimal: return "optimal";
    case PrecoderLabel::Uniform: return "uniform";
    case PrecoderLabel::Custom: return "custom";
  }
  return "?";
}

double trace_power(const CMatrix& f) { return f.squaredNorm(); }

Precoder::Precoder(CMatrix matrix, PrecoderLabel label) : matrix_(std::move(matrix)), label_(label) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw Error(ErrorKind::Shape, "precoder must be a non-empty square matrix");
  }
  if (!matrix_.allFinite()) throw Error(ErrorKind::Domain, "precoder has non-finite entries");
  const double power = trace_power(matrix_);
  if (std::abs(power - 1.0) > kTraceTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "precoder trace power is " << power << ", expected 1";
    throw Error(ErrorKind::Domain, msg.str());
  }
  const RVector sv = hermitian_eigenvalues(hermitian_part(matrix_.adjoint() * matrix_)).cwiseMax(0.0).cwiseSqrt();
  if (!(sv(0) > kRankTolerance * sv(sv.size() - 1))) {
    throw Error(ErrorKind::Rank, "precoder is rank deficient");
  }
}

Precoder optimal_precoder(const CMatrix& sigma) {
  const EigenSystem eig = definite_eig(sigma);
  const auto n = static_cast<std::size_t>(sigma.rows());
  const RVector scale = eig.values.array().pow(-0.25);
  const double norm = std::sqrt(inverse_root_sum(eig.values));
  CMatrix f = eig.basis * scale.asDiagonal() * dft_matrix(n);
  f /= norm;
  return Precoder(std::move(f), PrecoderLabel::Optimal);
}

Precoder uniform_precoder(std::size_t n_t) {
  if (n_t == 0) throw Error(ErrorKind::Dimension, "n_t must be >= 1");
  const auto n = static_cast<Eigen::Index>(n_t);
  CMatrix f = CMatrix::Identity(n, n) / std::sqrt(static_cast<double>(n_t));
  return Precoder(std::move(f), PrecoderLabel::Uniform);
}

double optimal_branch_argument(const CMatrix& sigma) {
  const EigenSystem eig = definite_eig(sigma);
  const double sum = inverse_root_sum(eig.values);
  return sum * sum / static_cast<double>(eig.values.size());
}

double min_avg_sep(const CMatrix& sigma, const GFunctionSpec& spec) {
  return g_value(spec, optimal_branch_argument(sigma));
}

std::vector<Precoder> multiuser_precoder(std::span<const CMatrix> covariances) {
  std::vector<Precoder> out;
  out.reserve(covariances.size());
  for (std::size_t user = 0; user < covariances.size(); ++user) {
    try {
      out.push_back(optimal_precoder(covariances[user]));
    } catch (const Error& e) {
      throw Error(e.kind(), "user " + std::to_string(user) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace mimosep
