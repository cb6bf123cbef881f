// SPDX-License-Identifier: Apache-2.0
//
// Linear precoders under a unit total-power budget.
#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "mimosep/sep.hpp"
#include "mimosep/toeplitz.hpp"

namespace mimosep {

enum class PrecoderLabel { Optimal, Uniform, Custom };

std::string_view to_string(PrecoderLabel label) noexcept;

/// Square N_t x N_t precoding matrix with trace(F^H F) = 1 and full rank.
class Precoder {
 public:
  /// Validates the invariants; throws Shape, Rank or Domain.
  Precoder(CMatrix matrix, PrecoderLabel label = PrecoderLabel::Custom);

  const CMatrix& matrix() const noexcept { return matrix_; }
  PrecoderLabel label() const noexcept { return label_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }

 private:
  CMatrix matrix_;
  PrecoderLabel label_;
};

/// trace(F^H F) for an arbitrary matrix.
double trace_power(const CMatrix& f);

/// Minimum-average-SEP precoder W L^{-1/4} V / sqrt(tr L^{-1/2}), where
/// (W, L) is the ascending eigendecomposition of the covariance and V the
/// normalized DFT matrix. All ZF branches end up with the same argument.
Precoder optimal_precoder(const CMatrix& sigma);

/// Equal power on every antenna, I / sqrt(n_t).
Precoder uniform_precoder(std::size_t n_t);

/// G((sum_k lambda_k^{-1/2})^2 / N_t), the SEP reached by optimal_precoder.
double min_avg_sep(const CMatrix& sigma, const GFunctionSpec& spec);

/// The common branch argument (sum_k lambda_k^{-1/2})^2 / N_t.
double optimal_branch_argument(const CMatrix& sigma);

/// One optimal precoder per user, each with its own unit power budget.
std::vector<Precoder> multiuser_precoder(std::span<const CMatrix> covariances);

}  // namespace mimosep
