// SPDX-License-Identifier: Apache-2.0
//
// JSON experiment configuration.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mimosep/constellation.hpp"
#include "mimosep/toeplitz.hpp"

namespace mimosep {

enum class Experiment { SepCurve, McValidate, Asymptote, Convergence, SnrDist, PrecodingGain, Multiuser };

std::string_view to_string(Experiment e) noexcept;
Experiment parse_experiment(std::string_view name);
const std::vector<Experiment>& all_experiments();

struct ModulationSpec {
  Modulation kind;
  unsigned m;

  std::string label() const;
};

/// Parses "16-QAM" style labels or {"kind": "QAM", "m": 16}.
ModulationSpec parse_modulation_spec(const nlohmann::json& node);

struct ExperimentConfig {
  Experiment experiment = Experiment::SepCurve;
  std::vector<ModulationSpec> modulations;
  std::vector<std::size_t> n_t;
  std::optional<std::size_t> n_r;
  std::vector<double> beta;
  std::vector<cd> rho;
  std::vector<double> snr_db;
  std::vector<std::string> precoders{"optimal"};
  std::vector<cd> users;
  std::size_t symbols = 100000;
  std::size_t draws = 2000;
  std::size_t bins = 40;
  std::uint64_t seed = 1;
  std::string output;

  /// (n_t, n_r) pairs in config order: every n_t with the fixed n_r, or every
  /// beta with every n_t (n_r = beta n_t, which must be an integer).
  std::vector<std::pair<std::size_t, std::size_t>> antenna_pairs() const;
};

/// Validates and fills an ExperimentConfig. `command` is the experiment named
/// on the command line; a conflicting "experiment" key is rejected. Every
/// problem is reported as a Config error naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& doc, std::optional<Experiment> command = std::nullopt);

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<Experiment> command = std::nullopt);

/// Linear SNR from decibels, 10^(db / 10).
double db_to_linear(double db);

}  // namespace mimosep
