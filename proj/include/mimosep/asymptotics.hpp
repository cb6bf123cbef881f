// SPDX-License-Identifier: Apache-2.0
//
// Large-array limits: Szego averages over a Toeplitz symbol, the constant
// Lambda = (1/2pi) int s(w)^{-1/2} dw, and the closed-form SEP and SNR limits
// for optimal and uniform precoding as N_t, N_r grow with N_r / N_t = beta.
#pragma once

#include <cstddef>
#include <functional>

#include "mimosep/constellation.hpp"
#include "mimosep/sep.hpp"
#include "mimosep/toeplitz.hpp"

namespace mimosep {

/// Points of the composite trapezoid rule used for generic symbols.
inline constexpr std::size_t kSzegoPoints = std::size_t{1} << 14;

/// (1/2pi) int_0^{2pi} f(psd(w)) dw. Throws Domain on a nonpositive sample.
double szego_functional(const std::function<double(double)>& psd, const std::function<double(double)>& f,
                        std::size_t points = kSzegoPoints);

/// Lambda for an arbitrary strictly positive symbol.
double lambda_limit(const std::function<double(double)>& psd, std::size_t points = kSzegoPoints);

/// Complete elliptic integral of the second kind E(k), 0 <= k <= 1, by the
/// arithmetic-geometric mean.
double elliptic_e(double k);

/// Closed-form Lambda of the KMS symbol; depends on |rho| only.
double lambda_kms(const KmsModel& model);

struct AsymptoticParams {
  double beta;
  double eta;
  double lambda;

  AsymptoticParams(double beta, double eta, double lambda);
};

/// A limit SEP. Values under 1e-300 are reported as 0 with `saturated` set.
struct AsymptoticSep {
  double value;
  bool saturated;
};

/// Limit of the minimum average SEP for a symbol with constant Lambda.
AsymptoticSep asymptotic_sep_optimal(Modulation kind, unsigned m, const AsymptoticParams& p);

/// Same limit for KMS correlation written directly in terms of E(k).
AsymptoticSep asymptotic_sep_kms_optimal(Modulation kind, unsigned m, const KmsModel& model, double beta,
                                         double eta);

/// Limit of the average SEP under uniform power allocation, KMS correlation.
AsymptoticSep asymptotic_sep_uniform_kms(Modulation kind, unsigned m, const KmsModel& model, double beta,
                                         double eta);

/// Deterministic limit eta (beta - 1) / Lambda^2 of every branch SNR.
double snr_limit(const AsymptoticParams& p);

struct SnrMoments {
  double mean;
  double variance;
};

/// Gaussian approximation of a branch SNR at finite n_t.
SnrMoments snr_gaussian_approx(const AsymptoticParams& p, std::size_t n_t);

/// Exact mean and variance of a branch SNR under optimal precoding.
SnrMoments snr_exact_moments(const CMatrix& sigma, const SystemDims& dims);

/// Ratio of the limiting branch SNR under optimal precoding to the one under
/// uniform precoding, for KMS correlation. Independent of eta and beta.
double asymptotic_precoding_gain(const KmsModel& model);

/// Limit SEP of a branch whose SNR has settled at `snr`, per modulation.
AsymptoticSep sep_at_limit_snr(Modulation kind, unsigned m, double snr);

}  // namespace mimosep
