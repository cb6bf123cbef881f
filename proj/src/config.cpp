// SPDX-License-Identifier: Apache-2.0
#include "mimosep/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mimosep/error.hpp"

namespace mimosep {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::Config, "field '" + field + "': " + what);
}

double number(const json& node, const std::string& field) {
  if (!node.is_number()) fail(field, "expected a number");
  const double v = node.get<double>();
  if (!std::isfinite(v)) fail(field, "must be finite");
  return v;
}

std::size_t count(const json& node, const std::string& field, std::size_t min_value) {
  if (!node.is_number_integer()) fail(field, "expected an integer");
  if (!node.is_number_unsigned() && node.get<std::int64_t>() < 0) fail(field, "must be non-negative");
  const auto v = node.get<std::uint64_t>();
  if (v < min_value) fail(field, "must be >= " + std::to_string(min_value));
  return static_cast<std::size_t>(v);
}

cd parse_rho(const json& node, const std::string& field) {
  if (!node.is_object()) fail(field, "expected {\"mag\": .., \"phase_rad\": ..}");
  for (const auto& [key, _] : node.items()) {
    if (key != "mag" && key != "phase_rad") fail(field, "unknown key '" + key + "'");
  }
  if (!node.contains("mag")) fail(field + ".mag", "missing");
  const double mag = number(node.at("mag"), field + ".mag");
  const double phase = node.contains("phase_rad") ? number(node.at("phase_rad"), field + ".phase_rad") : 0.0;
  if (mag < 0.0 || mag >= 1.0) fail(field + ".mag", "must satisfy 0 <= mag < 1");
  return std::polar(mag, phase);
}

// A scalar, a list, or {"start", "stop", "step"} (stop inclusive).
std::vector<double> number_list(const json& node, const std::string& field) {
  std::vector<double> out;
  if (node.is_number()) {
    out.push_back(number(node, field));
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) out.push_back(number(node[i], field + "[" + std::to_string(i) + "]"));
  } else if (node.is_object()) {
    for (const auto& [key, _] : node.items()) {
      if (key != "start" && key != "stop" && key != "step") fail(field, "unknown key '" + key + "'");
    }
    if (!node.contains("start") || !node.contains("stop") || !node.contains("step")) {
      fail(field, "range needs start, stop and step");
    }
    const double start = number(node.at("start"), field + ".start");
    const double stop = number(node.at("stop"), field + ".stop");
    const double step = number(node.at("step"), field + ".step");
    if (!(step > 0.0)) fail(field + ".step", "must be positive");
    if (stop < start) fail(field, "stop is below start");
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (n > 100000) fail(field, "range has too many points");
    for (std::size_t i = 0; i < n; ++i) out.push_back(start + step * static_cast<double>(i));
  } else {
    fail(field, "expected a number, a list or a range object");
  }
  if (out.empty()) fail(field, "must not be empty");
  return out;
}

std::vector<std::size_t> count_list(const json& node, const std::string& field, std::size_t min_value) {
  std::vector<std::size_t> out;
  if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      out.push_back(count(node[i], field + "[" + std::to_string(i) + "]", min_value));
    }
  } else {
    out.push_back(count(node, field, min_value));
  }
  if (out.empty()) fail(field, "must not be empty");
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{"experiment", "modulation", "modulations", "n_t",      "n_r",
                                          "beta",       "rho",        "rhos",        "snr_db",   "precoders",
                                          "users",      "symbols",    "draws",       "bins",     "seed",
                                          "output",     "comment"};
  return keys;
}

}  // namespace

std::string_view to_string(Experiment e) noexcept {
  switch (e) {
    case Experiment::SepCurve: return "sep-curve";
    case Experiment::McValidate: return "mc-validate";
    case Experiment::Asymptote: return "asymptote";
    case Experiment::Convergence: return "convergence";
    case Experiment::SnrDist: return "snr-dist";
    case Experiment::PrecodingGain: return "precoding-gain";
    case Experiment::Multiuser: return "multiuser";
  }
  return "?";
}

const std::vector<Experiment>& all_experiments() {
  static const std::vector<Experiment> all{Experiment::SepCurve,    Experiment::McValidate, Experiment::Asymptote,
                                           Experiment::Convergence, Experiment::SnrDist,    Experiment::PrecodingGain,
                                           Experiment::Multiuser};
  return all;
}

Experiment parse_experiment(std::string_view name) {
  for (const Experiment e : all_experiments()) {
    if (to_string(e) == name) return e;
  }
  fail("experiment", "unknown experiment '" + std::string(name) + "'");
}

std::string ModulationSpec::label() const { return std::to_string(m) + "-" + std::string(to_string(kind)); }

namespace {

Modulation modulation_kind(const std::string& text, const std::string& field) {
  try {
    return parse_modulation(text);
  } catch (const Error& e) {
    fail(field, e.what());
  }
}

}  // namespace

ModulationSpec parse_modulation_spec(const json& node) {
  ModulationSpec spec{};
  if (node.is_string()) {
    const auto text = node.get<std::string>();
    const auto dash = text.find('-');
    if (dash == std::string::npos || dash == 0) fail("modulation", "expected a label like \"16-QAM\", got '" + text + "'");
    unsigned long m = 0;
    try {
      std::size_t used = 0;
      m = std::stoul(text.substr(0, dash), &used);
      if (used != dash) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      fail("modulation", "bad order in '" + text + "'");
    }
    spec.kind = modulation_kind(text.substr(dash + 1), "modulation");
    spec.m = static_cast<unsigned>(m);
  } else if (node.is_object()) {
    if (!node.contains("kind") || !node.at("kind").is_string()) fail("modulation.kind", "missing or not a string");
    spec.kind = modulation_kind(node.at("kind").get<std::string>(), "modulation.kind");
    spec.m = static_cast<unsigned>(count(node.value("m", json()), "modulation.m", 2));
  } else {
    fail("modulation", "expected a string or an object");
  }
  try {
    (void)Constellation::build(spec.kind, spec.m);
  } catch (const Error& e) {
    fail("modulation", e.what());
  }
  return spec;
}

std::vector<std::pair<std::size_t, std::size_t>> ExperimentConfig::antenna_pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (n_r) {
    for (const std::size_t nt : n_t) out.emplace_back(nt, *n_r);
    return out;
  }
  for (const double b : beta) {
    for (const std::size_t nt : n_t) {
      const double nr = b * static_cast<double>(nt);
      out.emplace_back(nt, static_cast<std::size_t>(std::llround(nr)));
    }
  }
  return out;
}

ExperimentConfig parse_config(const json& doc, std::optional<Experiment> command) {
  if (!doc.is_object()) fail("<root>", "config must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!known_keys().contains(key)) fail(key, "unknown key");
  }
  ExperimentConfig cfg;
  if (doc.contains("experiment")) {
    if (!doc.at("experiment").is_string()) fail("experiment", "expected a string");
    cfg.experiment = parse_experiment(doc.at("experiment").get<std::string>());
    if (command && *command != cfg.experiment) {
      fail("experiment", "config is for '" + std::string(to_string(cfg.experiment)) + "' but '" +
                             std::string(to_string(*command)) + "' was requested");
    }
  } else if (command) {
    cfg.experiment = *command;
  } else {
    fail("experiment", "missing");
  }
  const Experiment e = cfg.experiment;

  // Modulations.
  if (doc.contains("modulation") && doc.contains("modulations")) fail("modulations", "give either modulation or modulations");
  if (doc.contains("modulation")) {
    cfg.modulations.push_back(parse_modulation_spec(doc.at("modulation")));
  } else if (doc.contains("modulations")) {
    const json& list = doc.at("modulations");
    if (!list.is_array() || list.empty()) fail("modulations", "expected a non-empty list");
    for (const auto& item : list) cfg.modulations.push_back(parse_modulation_spec(item));
  } else if (e != Experiment::PrecodingGain && e != Experiment::SnrDist) {
    fail("modulations", "missing");
  }

  // Correlation.
  if (doc.contains("rho") && doc.contains("rhos")) fail("rhos", "give either rho or rhos");
  if (doc.contains("rho")) {
    cfg.rho.push_back(parse_rho(doc.at("rho"), "rho"));
  } else if (doc.contains("rhos")) {
    const json& list = doc.at("rhos");
    if (!list.is_array() || list.empty()) fail("rhos", "expected a non-empty list");
    for (std::size_t i = 0; i < list.size(); ++i) cfg.rho.push_back(parse_rho(list[i], "rhos[" + std::to_string(i) + "]"));
  } else if (e != Experiment::Multiuser) {
    fail("rho", "missing");
  }

  if (doc.contains("users")) {
    const json& list = doc.at("users");
    if (!list.is_array() || list.empty()) fail("users", "expected a non-empty list of rho objects");
    for (std::size_t i = 0; i < list.size(); ++i) cfg.users.push_back(parse_rho(list[i], "users[" + std::to_string(i) + "]"));
  } else if (e == Experiment::Multiuser) {
    fail("users", "missing");
  }

  // SNR.
  if (doc.contains("snr_db")) {
    cfg.snr_db = number_list(doc.at("snr_db"), "snr_db");
  } else if (e != Experiment::PrecodingGain) {
    fail("snr_db", "missing");
  }

  // Antennas. Limit curves only need the ratio.
  if (e == Experiment::Asymptote) {
    if (!doc.contains("beta")) fail("beta", "missing");
    if (doc.contains("n_t") || doc.contains("n_r")) fail("beta", "asymptote runs take beta only");
    cfg.beta = number_list(doc.at("beta"), "beta");
    for (const double b : cfg.beta) {
      if (!(b > 1.0)) fail("beta", "must be > 1");
    }
  } else if (e != Experiment::PrecodingGain) {
    if (!doc.contains("n_t")) fail("n_t", "missing");
    cfg.n_t = count_list(doc.at("n_t"), "n_t", 1);
    if (e == Experiment::Convergence) {
      for (std::size_t i = 1; i < cfg.n_t.size(); ++i) {
        if (cfg.n_t[i] <= cfg.n_t[i - 1]) fail("n_t", "must be strictly ascending for convergence runs");
      }
    }
    if (doc.contains("n_r") && doc.contains("beta")) fail("beta", "give either n_r or beta");
    if (doc.contains("n_r")) {
      cfg.n_r = count(doc.at("n_r"), "n_r", 2);
    } else if (doc.contains("beta")) {
      cfg.beta = number_list(doc.at("beta"), "beta");
      for (const double b : cfg.beta) {
        if (!(b > 1.0)) fail("beta", "must be > 1");
        for (const std::size_t nt : cfg.n_t) {
          const double nr = b * static_cast<double>(nt);
          if (std::abs(nr - std::round(nr)) > 1e-9) {
            std::ostringstream msg;
            msg << "beta " << b << " times n_t " << nt << " is not an integer";
            fail("beta", msg.str());
          }
        }
      }
    } else {
      fail("n_r", "missing (give n_r or beta)");
    }
    if (e == Experiment::Convergence && cfg.n_r) fail("beta", "convergence runs fix beta, not n_r");
    const std::size_t users = e == Experiment::Multiuser ? cfg.users.size() : 1;
    for (const auto& [nt, nr] : cfg.antenna_pairs()) {
      if (nr <= users * nt) {
        fail(cfg.n_r ? "n_r" : "beta", "need N_r > " + std::string(users > 1 ? "K N_t" : "N_t") + " (N_t = " +
                                            std::to_string(nt) + ", N_r = " + std::to_string(nr) + ")");
      }
    }
  }

  if (doc.contains("precoders")) {
    const json& list = doc.at("precoders");
    if (!list.is_array() || list.empty()) fail("precoders", "expected a non-empty list");
    cfg.precoders.clear();
    for (const auto& item : list) {
      if (!item.is_string()) fail("precoders", "expected strings");
      const auto name = item.get<std::string>();
      if (name != "optimal" && name != "uniform") fail("precoders", "unknown precoder '" + name + "'");
      cfg.precoders.push_back(name);
    }
  }
  if (doc.contains("symbols")) cfg.symbols = count(doc.at("symbols"), "symbols", 10000);
  if (doc.contains("draws")) cfg.draws = count(doc.at("draws"), "draws", 2);
  if (doc.contains("bins")) cfg.bins = count(doc.at("bins"), "bins", 0);
  if (e == Experiment::SnrDist && cfg.bins < 2) fail("bins", "a histogram needs at least 2 bins");
  if (doc.contains("seed")) cfg.seed = static_cast<std::uint64_t>(count(doc.at("seed"), "seed", 0));
  if (doc.contains("output")) {
    if (!doc.at("output").is_string()) fail("output", "expected a string");
    cfg.output = doc.at("output").get<std::string>();
    if (cfg.output.empty() || cfg.output.find('/') != std::string::npos) fail("output", "must be a plain file stem");
  } else {
    cfg.output = std::string(to_string(e));
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<Experiment> command) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, "'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc, command);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace mimosep
