// SPDX-License-Identifier: Apache-2.0
#include "mimosep/sep.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mimosep/error.hpp"
#include "mimosep/precoder.hpp"
#include "mimosep/quadrature.hpp"

namespace mimosep {

namespace {

constexpr double kRankTolerance = 1e-14;

// (1 + c / (x sin^2 t))^{-L}, evaluated as exp(-L log1p(.)) so large L
// does not underflow intermediate powers.
struct BranchIntegrand {
  double c_over_x;
  double order;

  double operator()(double t) const {
    const double s = std::sin(t);
    return std::exp(-order * std::log1p(c_over_x / (s * s)));
  }
};

}  // namespace

SystemDims::SystemDims(std::size_t n_t_, std::size_t n_r_, double eta_) : n_t(n_t_), n_r(n_r_), eta(eta_) {
  if (n_t == 0) throw Error(ErrorKind::Dimension, "N_t must be >= 1");
  if (n_r <= n_t) {
    std::ostringstream msg;
    msg << "ZF needs N_r > N_t (got N_t = " << n_t << ", N_r = " << n_r << ")";
    throw Error(ErrorKind::Dimension, msg.str());
  }
  if (!(eta > 0.0)) throw Error(ErrorKind::Domain, "SNR eta must be positive");
}

GFunctionSpec::GFunctionSpec(Modulation kind_, unsigned m_, SystemDims dims_)
    : kind(kind_), m(m_), dims(dims_), diversity(dims_.n_r - dims_.n_t + 1) {
  // Validates the order for the given kind.
  (void)Constellation::build(kind, m);
}

GFunctionSpec GFunctionSpec::multiuser(Modulation kind, unsigned m, std::size_t users, SystemDims dims) {
  if (users == 0) throw Error(ErrorKind::Dimension, "need at least one user");
  if (dims.n_r <= users * dims.n_t) {
    std::ostringstream msg;
    msg << "multiuser ZF needs N_r > K N_t (got K = " << users << ", N_t = " << dims.n_t
        << ", N_r = " << dims.n_r << ")";
    throw Error(ErrorKind::Dimension, msg.str());
  }
  GFunctionSpec spec(kind, m, dims);
  spec.diversity = dims.n_r - users * dims.n_t + 1;
  return spec;
}

double gauss_q(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return 1.0 - gauss_q(-x);
  if (std::isinf(x)) return 0.0;
  return craig_integral(0.5 * x * x, std::numbers::pi / 2.0);
}

double q_squared(double x) {
  if (!(x >= 0.0)) throw Error(ErrorKind::Domain, "q_squared needs x >= 0");
  if (std::isinf(x)) return 0.0;
  return craig_integral(0.5 * x * x, std::numbers::pi / 4.0);
}

double g_value(const GFunctionSpec& spec, double x, std::size_t nodes) {
  if (!(x > 0.0)) throw Error(ErrorKind::Domain, "G(x) needs x > 0");
  const double eta = spec.dims.eta;
  const double order = static_cast<double>(spec.diversity);
  const double m = static_cast<double>(spec.m);
  constexpr double pi = std::numbers::pi;
  switch (spec.kind) {
    case Modulation::Pam: {
      const BranchIntegrand f{3.0 * eta / ((m * m - 1.0) * x), order};
      return 2.0 * (m - 1.0) / (m * pi) * integrate_gl(f, 0.0, pi / 2.0, nodes);
    }
    case Modulation::Psk: {
      const double s = std::sin(pi / m);
      const BranchIntegrand f{eta * s * s / x, order};
      return integrate_gl(f, 0.0, (m - 1.0) * pi / m, nodes) / pi;
    }
    case Modulation::Qam: {
      const double root = std::sqrt(m);
      const BranchIntegrand f{3.0 * eta / (2.0 * (m - 1.0) * x), order};
      const double outer = 4.0 * (root - 1.0) / (root * pi) * integrate_gl(f, pi / 4.0, pi / 2.0, nodes);
      const double inner = 4.0 * (root - 1.0) / (m * pi) * integrate_gl(f, 0.0, pi / 4.0, nodes);
      return outer + inner;
    }
  }
  throw Error(ErrorKind::Domain, "unknown modulation");
}

double threshold_t(const GFunctionSpec& spec) {
  if (spec.diversity < 2) throw Error(ErrorKind::Dimension, "convexity threshold needs N_r > N_t");
  const double eta = spec.dims.eta;
  const double excess = static_cast<double>(spec.diversity - 1);
  const double m = static_cast<double>(spec.m);
  switch (spec.kind) {
    case Modulation::Pam: return 3.0 * eta * excess / (2.0 * (m * m - 1.0));
    case Modulation::Psk: {
      const double s = std::sin(std::numbers::pi / m);
      return eta * excess * s * s / 2.0;
    }
    case Modulation::Qam: return 3.0 * eta * excess / (4.0 * (m - 1.0));
  }
  throw Error(ErrorKind::Domain, "unknown modulation");
}

RVector inverse_gram_diagonal(const CMatrix& f, const CMatrix& sigma) {
  if (sigma.rows() != f.rows() || sigma.cols() != f.rows()) {
    throw Error(ErrorKind::Shape, "covariance and precoder sizes differ");
  }
  const EigenSystem eig = hermitian_eig(hermitian_part(f.adjoint() * sigma * f));
  const double top = eig.values.maxCoeff();
  const double bottom = eig.values.minCoeff();
  if (!(bottom > kRankTolerance * top)) {
    std::ostringstream msg;
    msg << "F^H S F is singular (eigenvalues " << bottom << " .. " << top << ")";
    throw Error(ErrorKind::Rank, msg.str());
  }
  const RVector inv = eig.values.cwiseInverse();
  return eig.basis.cwiseAbs2() * inv;
}

double avg_sep(const Precoder& f, const CMatrix& sigma, const GFunctionSpec& spec) {
  const RVector x = inverse_gram_diagonal(f.matrix(), sigma);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) sum += g_value(spec, x(k));
  return sum / static_cast<double>(x.size());
}

ConvexityReport convexity_check(const Precoder& f, const CMatrix& sigma, const GFunctionSpec& spec,
                                const KmsModel* kms) noexcept {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  ConvexityReport report{false, nan, nan, nan};
  try {
    const double t = threshold_t(spec);
    report.zeta1_ffh = hermitian_eigenvalues(hermitian_part(f.matrix().adjoint() * f.matrix())).minCoeff();
    const double lambda1 = hermitian_eigenvalues(sigma).minCoeff();
    report.bound = 1.0 / (lambda1 * t);
    if (kms != nullptr) {
      const double r = kms->magnitude();
      report.kms_bound = (1.0 + r) / (t * (1.0 - r));
    }
    report.satisfied = lambda1 > 0.0 && report.zeta1_ffh >= report.bound;
  } catch (...) {
    report.satisfied = false;
  }
  return report;
}

double multiuser_avg_sep(std::span<const Precoder> precoders, std::span<const CMatrix> covariances,
                         Modulation kind, unsigned m, SystemDims dims) {
  if (precoders.size() != covariances.size() || precoders.empty()) {
    throw Error(ErrorKind::Dimension, "need one covariance per user precoder");
  }
  const GFunctionSpec spec = GFunctionSpec::multiuser(kind, m, precoders.size(), dims);
  double sum = 0.0;
  std::size_t branches = 0;
  for (std::size_t user = 0; user < precoders.size(); ++user) {
    if (precoders[user].size() != dims.n_t) {
      throw Error(ErrorKind::Dimension, "user " + std::to_string(user) + " precoder is not N_t x N_t");
    }
    const RVector x = inverse_gram_diagonal(precoders[user].matrix(), covariances[user]);
    for (Eigen::Index k = 0; k < x.size(); ++k) sum += g_value(spec, x(k));
    branches += static_cast<std::size_t>(x.size());
  }
  return sum / static_cast<double>(branches);
}

}  // namespace mimosep
