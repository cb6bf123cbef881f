// SPDX-License-Identifier: Apache-2.0
//
// Figure-style parameter sweeps. Each runner turns a validated config into a
// result table; the same config and seed always give the same table.
#pragma once

#include <cstdint>

#include "mimosep/config.hpp"
#include "mimosep/csv.hpp"
#include "mimosep/svg.hpp"

namespace mimosep {

/// Analytic SEP against SNR for optimal and uniform precoding, with the
/// large-array limits alongside.
Table run_sep_curve(const ExperimentConfig& cfg);

/// Monte Carlo SEP next to the analytic value, with the z-score.
Table run_mc_validate(const ExperimentConfig& cfg, unsigned workers);

/// Limit SEP curves for optimal and uniform precoding.
Table run_asymptote(const ExperimentConfig& cfg);

/// Exact minimum SEP against N_t at fixed beta, and its distance to the limit.
Table run_convergence(const ExperimentConfig& cfg);

/// Histogram of per-branch SNRs under optimal precoding with the Gaussian
/// large-array approximation evaluated at the bin centres.
Table run_snr_dist(const ExperimentConfig& cfg, unsigned workers);

/// Limiting SNR gain of optimal over uniform precoding.
Table run_precoding_gain(const ExperimentConfig& cfg);

/// K-user block system with per-user optimal or uniform precoders.
Table run_multiuser(const ExperimentConfig& cfg);

Table run_experiment(const ExperimentConfig& cfg, unsigned workers);

/// Default plot for an experiment's table.
PlotSpec default_plot(const ExperimentConfig& cfg);

/// Independent seed for sweep point `index` (splitmix64 of seed + index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace mimosep
