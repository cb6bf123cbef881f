// SPDX-License-Identifier: Apache-2.0
//
// Seeded end-to-end ZF link simulation.
//
// Every trial t draws from RngStream(seed, t) and nothing else, and results
// are reduced in trial order, so the output depends on the seed alone and
// not on how many worker threads ran the trials.
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mimosep/constellation.hpp"
#include "mimosep/precoder.hpp"
#include "mimosep/rng.hpp"
#include "mimosep/sep.hpp"
#include "mimosep/toeplitz.hpp"

namespace mimosep {

struct ChannelRealization {
  CMatrix h;  // N_r x N_t
};

/// Draws H = G S^{1/2} with i.i.d. CN(0, 1) entries in G, so every row of H
/// has covariance S and distinct rows are independent. The square root is
/// computed once at construction.
class ChannelSampler {
 public:
  ChannelSampler(const CMatrix& sigma, std::size_t n_r);

  ChannelRealization draw(RngStream& stream) const;

  /// The white factor G of the next draw; H = G root().
  CMatrix draw_white(RngStream& stream) const;

  const CMatrix& root() const noexcept { return root_; }

  std::size_t n_t() const noexcept { return static_cast<std::size_t>(root_.rows()); }
  std::size_t n_r() const noexcept { return n_r_; }

 private:
  CMatrix root_;
  std::size_t n_r_;
};

ChannelRealization sample_channel(const CMatrix& sigma, std::size_t n_r, RngStream& stream);

/// Pseudo-inverse of the effective channel A = H F, (A^H A)^{-1} A^H, applied
/// through the eigendecomposition of the Gram matrix A^H A.
class ZfEqualizer {
 public:
  /// Throws Rank when A is not full column rank or cond(A^H A) > 1e12.
  explicit ZfEqualizer(const CMatrix& effective);
  ZfEqualizer(const CMatrix& h, const CMatrix& f);

  CVector apply(const CVector& r) const;

  /// Diagonal of (A^H A)^{-1}.
  const RVector& inverse_gram_diagonal() const noexcept { return inv_diag_; }

 private:
  CMatrix a_;
  CMatrix basis_;
  RVector inv_;
  RVector inv_diag_;
};

CVector zf_equalize(const ChannelRealization& h, const Precoder& f, const CVector& r);

/// Per-branch post-ZF SNR eta / [(F^H H^H H F)^{-1}]_kk.
RVector empirical_snr(const ChannelRealization& h, const Precoder& f, double eta);

struct SystemConfig {
  Modulation kind;
  unsigned m;
  SystemDims dims;
  CMatrix sigma;  // N_t x N_t transmit covariance

  SystemConfig(Modulation kind, unsigned m, SystemDims dims, CMatrix sigma);
};

struct SepEstimate {
  double p_hat;
  std::size_t n_symbols;
  std::size_t n_errors;
  double std_err;  // sqrt(p_hat (1 - p_hat) / n_symbols)
};

/// 0 selects std::thread::hardware_concurrency().
unsigned resolve_workers(unsigned workers) noexcept;

/// Simulates ceil(n_symbols / N_t) channel uses (one channel draw per symbol
/// vector) and counts hard-decision errors over all N_t streams.
/// Requires n_symbols >= 1e4. eta may be +infinity for a noiseless link.
SepEstimate simulate_sep(const SystemConfig& config, const Precoder& f, std::size_t n_symbols,
                         std::uint64_t seed, unsigned workers = 0);

/// Branch SNRs of n_draws independent channels, draw-major (N_t per draw).
std::vector<double> collect_branch_snr(const CMatrix& sigma, const Precoder& f, std::size_t n_r, double eta,
                                       std::size_t n_draws, std::uint64_t seed, unsigned workers = 0);

/// Sample statistics of g_k = [(F^H S F)^{-1}]_kk / [(F^H H^H H F)^{-1}]_kk,
/// which is Gamma(N_r - N_t + 1, 1) distributed for every branch.
///
/// Standard errors treat one channel draw as the independent unit, since
/// the N_t branches of a draw share the same H.
struct ChiSquareReport {
  double expected;       // N_r - N_t + 1, both the mean and the variance
  double mean;
  double variance;
  double mean_err;       // mean - expected
  double var_err;        // variance - expected
  double mean_std_err;
  double var_std_err;
  std::vector<double> branch_mean;
  std::vector<double> branch_std_err;
  std::size_t n_draws;
};

/// n_r >= N_t is allowed here (n_r = N_t gives the exponential case).
ChiSquareReport chi_square_check(const CMatrix& sigma, const Precoder& f, std::size_t n_r, std::size_t n_draws,
                                 std::uint64_t seed, unsigned workers = 0);

}  // namespace mimosep
