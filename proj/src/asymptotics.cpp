// SPDX-License-Identifier: Apache-2.0
#include "mimosep/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mimosep/error.hpp"
#include "mimosep/precoder.hpp"
#include "mimosep/quadrature.hpp"

namespace mimosep {

namespace {

constexpr double kSaturation = 1e-300;
constexpr double kAgmTolerance = 1e-15;
constexpr int kAgmMaxSteps = 64;

AsymptoticSep saturate(double value) {
  if (value < kSaturation) return {0.0, true};
  return {value, false};
}

void require_beta(double beta) {
  if (!(beta > 1.0)) {
    std::ostringstream msg;
    msg << "antenna ratio beta must exceed 1 (got " << beta << ")";
    throw Error(ErrorKind::Domain, msg.str());
  }
}

void require_eta(double eta) {
  if (!(eta > 0.0)) throw Error(ErrorKind::Domain, "SNR eta must be positive");
}

// Uniform precoding replaces 1/Lambda^2 by this factor.
double uniform_factor(double r) { return (1.0 - r * r) / (1.0 + r * r); }

}  // namespace

double szego_functional(const std::function<double(double)>& psd, const std::function<double(double)>& f,
                        std::size_t points) {
  if (points < 2) throw Error(ErrorKind::Domain, "need at least two quadrature points");
  const double step = 2.0 * std::numbers::pi / static_cast<double>(points);
  double sum = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double omega = step * static_cast<double>(i);
    const double s = psd(omega);
    if (!(s > 0.0)) {
      std::ostringstream msg;
      msg << "spectral density is not positive at omega = " << omega << " (value " << s << ")";
      throw Error(ErrorKind::Domain, msg.str());
    }
    sum += f(s);
  }
  return sum / static_cast<double>(points);
}

double lambda_limit(const std::function<double(double)>& psd, std::size_t points) {
  return szego_functional(psd, [](double s) { return 1.0 / std::sqrt(s); }, points);
}

double elliptic_e(double k) {
  if (!(k >= 0.0 && k <= 1.0)) {
    std::ostringstream msg;
    msg << "elliptic modulus must lie in [0, 1] (got " << k << ")";
    throw Error(ErrorKind::Domain, msg.str());
  }
  if (k == 0.0) return std::numbers::pi / 2.0;
  if (k == 1.0) return 1.0;
  double a = 1.0;
  double b = std::sqrt((1.0 - k) * (1.0 + k));
  double c = k;
  double sum = 0.5 * c * c;
  double weight = 0.5;
  for (int step = 0; step < kAgmMaxSteps; ++step) {
    if (std::abs(c) <= kAgmTolerance * a) break;
    c = 0.5 * (a - b);
    const double next_a = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next_a;
    weight *= 2.0;
    sum += weight * c * c;
  }
  const double big_k = std::numbers::pi / (2.0 * a);
  return big_k * (1.0 - sum);
}

double lambda_kms(const KmsModel& model) {
  const double r = model.magnitude();
  const double modulus = 2.0 * std::sqrt(r) / (1.0 + r);
  return (2.0 / std::numbers::pi) * std::sqrt((1.0 + r) / (1.0 - r)) * elliptic_e(modulus);
}

AsymptoticParams::AsymptoticParams(double beta_, double eta_, double lambda_)
    : beta(beta_), eta(eta_), lambda(lambda_) {
  require_beta(beta);
  require_eta(eta);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::Domain, "Lambda must be positive");
}

AsymptoticSep sep_at_limit_snr(Modulation kind, unsigned m, double snr) {
  if (!(snr >= 0.0)) throw Error(ErrorKind::Domain, "limit SNR must be non-negative");
  (void)Constellation::build(kind, m);
  const double dm = static_cast<double>(m);
  switch (kind) {
    case Modulation::Pam: {
      const double z = std::sqrt(6.0 * snr / (dm * dm - 1.0));
      return saturate(2.0 * (dm - 1.0) / dm * gauss_q(z));
    }
    case Modulation::Psk: {
      const double s = std::sin(std::numbers::pi / dm);
      return saturate(craig_integral(snr * s * s, (dm - 1.0) * std::numbers::pi / dm));
    }
    case Modulation::Qam: {
      const double root = std::sqrt(dm);
      const double z = std::sqrt(3.0 * snr / (dm - 1.0));
      const double a = 4.0 * (root - 1.0) / root;
      const double b = 4.0 * (root - 1.0) * (root - 1.0) / dm;
      return saturate(a * gauss_q(z) - b * q_squared(z));
    }
  }
  throw Error(ErrorKind::Domain, "unknown modulation");
}

AsymptoticSep asymptotic_sep_optimal(Modulation kind, unsigned m, const AsymptoticParams& p) {
  return sep_at_limit_snr(kind, m, snr_limit(p));
}

AsymptoticSep asymptotic_sep_kms_optimal(Modulation kind, unsigned m, const KmsModel& model, double beta,
                                         double eta) {
  require_beta(beta);
  require_eta(eta);
  const double r = model.magnitude();
  const double e = elliptic_e(2.0 * std::sqrt(r) / (1.0 + r));
  const double pi = std::numbers::pi;
  // 1 / Lambda_KMS^2 expanded through the elliptic integral.
  const double inv_lambda_sq = pi * pi * (1.0 - r) / (4.0 * (1.0 + r) * e * e);
  return sep_at_limit_snr(kind, m, eta * (beta - 1.0) * inv_lambda_sq);
}

AsymptoticSep asymptotic_sep_uniform_kms(Modulation kind, unsigned m, const KmsModel& model, double beta,
                                         double eta) {
  require_beta(beta);
  require_eta(eta);
  return sep_at_limit_snr(kind, m, eta * (beta - 1.0) * uniform_factor(model.magnitude()));
}

double snr_limit(const AsymptoticParams& p) { return p.eta * (p.beta - 1.0) / (p.lambda * p.lambda); }

SnrMoments snr_gaussian_approx(const AsymptoticParams& p, std::size_t n_t) {
  if (n_t == 0) throw Error(ErrorKind::Dimension, "n_t must be >= 1");
  const double l2 = p.lambda * p.lambda;
  return {p.eta * (p.beta - 1.0) / l2, p.eta * p.eta * (p.beta - 1.0) / (static_cast<double>(n_t) * l2 * l2)};
}

SnrMoments snr_exact_moments(const CMatrix& sigma, const SystemDims& dims) {
  if (static_cast<std::size_t>(sigma.rows()) != dims.n_t) {
    throw Error(ErrorKind::Dimension, "covariance order differs from N_t");
  }
  // optimal_branch_argument = (sum lambda^{-1/2})^2 / N_t.
  const double x = optimal_branch_argument(sigma);
  const double order = static_cast<double>(dims.n_r - dims.n_t + 1);
  const double mean = order * dims.eta / x;
  return {mean, order * (dims.eta / x) * (dims.eta / x)};
}

double asymptotic_precoding_gain(const KmsModel& model) {
  const double lambda = lambda_kms(model);
  return 1.0 / (lambda * lambda * uniform_factor(model.magnitude()));
}

}  // namespace mimosep
