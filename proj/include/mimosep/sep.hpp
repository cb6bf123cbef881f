// SPDX-License-Identifier: Apache-2.0
//
// Channel-averaged symbol error probability of a precoded ZF link.
//
// For a precoder F and transmit covariance S every ZF branch k sees an
// effective noise-power argument x_k = [(F^H S F)^{-1}]_kk, and the average
// SEP is (1/Nt) sum_k G(x_k) with the modulation's G function below.
#pragma once

#include <cstddef>
#include <span>

#include "mimosep/constellation.hpp"
#include "mimosep/toeplitz.hpp"

namespace mimosep {

class Precoder;

/// Link dimensions and linear SNR (eta = 1 / noise variance).
struct SystemDims {
  std::size_t n_t;
  std::size_t n_r;
  double eta;

  SystemDims(std::size_t n_t, std::size_t n_r, double eta);

  double beta() const noexcept { return static_cast<double>(n_r) / static_cast<double>(n_t); }
};

/// Modulation plus the chi-square order of each branch. Single-user links use
/// order N_r - N_t + 1; the K-user block system uses N_r - K N_t + 1.
struct GFunctionSpec {
  Modulation kind;
  unsigned m;
  SystemDims dims;
  std::size_t diversity;

  GFunctionSpec(Modulation kind, unsigned m, SystemDims dims);
  static GFunctionSpec multiuser(Modulation kind, unsigned m, std::size_t users, SystemDims dims);
};

inline constexpr std::size_t kDefaultGNodes = 128;

/// Gaussian tail Q(x) from its finite-angle (Craig) form, Q(-x) = 1 - Q(x).
double gauss_q(double x);

/// Q(x)^2 from (1/pi) int_0^{pi/4} exp(-x^2 / (2 sin^2 t)) dt, x >= 0.
double q_squared(double x);

/// The modulation's G(x): SEP of one ZF branch averaged over the channel,
/// as a function of its noise-power argument x > 0. `nodes` is the
/// Gauss-Legendre order per angular interval.
double g_value(const GFunctionSpec& spec, double x, std::size_t nodes = kDefaultGNodes);

/// Upper end T of the interval (0, T] on which G is convex.
double threshold_t(const GFunctionSpec& spec);

/// Diagonal of (F^H S F)^{-1}, via the Hermitian eigendecomposition.
RVector inverse_gram_diagonal(const CMatrix& f, const CMatrix& sigma);

double avg_sep(const Precoder& f, const CMatrix& sigma, const GFunctionSpec& spec);

struct ConvexityReport {
  bool satisfied;
  double zeta1_ffh;   // smallest eigenvalue of F^H F
  double bound;       // 1 / (lambda_1(S) T)
  double kms_bound;   // (1 + |rho|) / (T (1 - |rho|)), NaN unless a KMS model was given
};

/// Whether F lies in the region where every branch argument is <= T.
/// Never throws; numerical failures are reported as an unsatisfied check.
ConvexityReport convexity_check(const Precoder& f, const CMatrix& sigma, const GFunctionSpec& spec,
                                const KmsModel* kms = nullptr) noexcept;

/// Arithmetic mean SEP of K users each with its own precoder and covariance.
double multiuser_avg_sep(std::span<const Precoder> precoders, std::span<const CMatrix> covariances,
                         Modulation kind, unsigned m, SystemDims dims);

}  // namespace mimosep
