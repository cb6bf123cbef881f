// SPDX-License-Identifier: Apache-2.0
#include "mimosep/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>

#include "mimosep/asymptotics.hpp"
#include "mimosep/error.hpp"
#include "mimosep/montecarlo.hpp"
#include "mimosep/precoder.hpp"
#include "mimosep/sep.hpp"

namespace mimosep {

namespace {

CMatrix kms_sigma(cd rho, std::size_t n) { return materialize(kms_covariance(KmsModel(rho), n)); }

std::string antenna_tag(std::size_t n_t, std::size_t n_r) {
  return "Nt=" + std::to_string(n_t) + " Nr=" + std::to_string(n_r);
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string rho_tag(cd rho) { return "|rho|=" + short_number(std::abs(rho)); }

double mean_g(const GFunctionSpec& spec, const RVector& x) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) sum += g_value(spec, x(k));
  return sum / static_cast<double>(x.size());
}

double relative(double a, double b) { return b == 0.0 ? std::numeric_limits<double>::infinity() : std::abs(a - b) / b; }

// Precomputed per-(N_t, rho) quantities shared by every SNR point.
struct Geometry {
  CMatrix sigma;
  Precoder optimal;
  Precoder uniform;
  RVector x_optimal;
  RVector x_uniform;
};

Geometry make_geometry(cd rho, std::size_t n_t) {
  CMatrix sigma = kms_sigma(rho, n_t);
  Precoder opt = optimal_precoder(sigma);
  Precoder uni = uniform_precoder(n_t);
  RVector xo = inverse_gram_diagonal(opt.matrix(), sigma);
  RVector xu = inverse_gram_diagonal(uni.matrix(), sigma);
  return {std::move(sigma), std::move(opt), std::move(uni), std::move(xo), std::move(xu)};
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Table run_sep_curve(const ExperimentConfig& cfg) {
  Table table({"series", "modulation", "n_t", "n_r", "rho_mag", "rho_phase", "snr_db", "analytic_optimal",
               "analytic_uniform", "asymptotic_optimal", "asymptotic_uniform", "convex_optimal"});
  for (const auto& mod : cfg.modulations) {
    for (const auto& [n_t, n_r] : cfg.antenna_pairs()) {
      for (const cd rho : cfg.rho) {
        const Geometry geo = make_geometry(rho, n_t);
        const KmsModel model(rho);
        const std::string series = mod.label() + " " + antenna_tag(n_t, n_r) + " " + rho_tag(rho);
        for (const double db : cfg.snr_db) {
          const SystemDims dims(n_t, n_r, db_to_linear(db));
          const GFunctionSpec spec(mod.kind, mod.m, dims);
          const double beta = dims.beta();
          const auto lim_opt = asymptotic_sep_kms_optimal(mod.kind, mod.m, model, beta, dims.eta);
          const auto lim_uni = asymptotic_sep_uniform_kms(mod.kind, mod.m, model, beta, dims.eta);
          const bool convex = convexity_check(geo.optimal, geo.sigma, spec, &model).satisfied;
          table.add_row({series, mod.label(), double(n_t), double(n_r), std::abs(rho), std::arg(rho), db,
                         mean_g(spec, geo.x_optimal), mean_g(spec, geo.x_uniform), lim_opt.value, lim_uni.value,
                         convex ? 1.0 : 0.0});
        }
      }
    }
  }
  return table;
}

Table run_mc_validate(const ExperimentConfig& cfg, unsigned workers) {
  Table table({"series", "modulation", "precoder", "n_t", "n_r", "rho_mag", "snr_db", "analytic_sep", "mc_sep",
               "mc_std_err", "n_symbols", "n_errors", "z_score"});
  std::uint64_t point = 0;
  for (const auto& mod : cfg.modulations) {
    for (const auto& [n_t, n_r] : cfg.antenna_pairs()) {
      for (const cd rho : cfg.rho) {
        const Geometry geo = make_geometry(rho, n_t);
        for (const auto& name : cfg.precoders) {
          const bool optimal = name == "optimal";
          const Precoder& f = optimal ? geo.optimal : geo.uniform;
          const RVector& x = optimal ? geo.x_optimal : geo.x_uniform;
          const std::string series = mod.label() + " " + name + " " + antenna_tag(n_t, n_r) + " " + rho_tag(rho);
          for (const double db : cfg.snr_db) {
            const SystemDims dims(n_t, n_r, db_to_linear(db));
            const GFunctionSpec spec(mod.kind, mod.m, dims);
            const double analytic = mean_g(spec, x);
            const SystemConfig system(mod.kind, mod.m, dims, geo.sigma);
            const SepEstimate est = simulate_sep(system, f, cfg.symbols, derive_seed(cfg.seed, point++), workers);
            const double diff = est.p_hat - analytic;
            const double z = est.std_err > 0.0 ? diff / est.std_err
                                               : (diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff));
            table.add_row({series, mod.label(), name, double(n_t), double(n_r), std::abs(rho), db, analytic,
                           est.p_hat, est.std_err, double(est.n_symbols), double(est.n_errors), z});
          }
        }
      }
    }
  }
  return table;
}

Table run_asymptote(const ExperimentConfig& cfg) {
  Table table({"series", "modulation", "rho_mag", "beta", "snr_db", "lambda", "limit_optimal", "limit_uniform",
               "saturated"});
  for (const auto& mod : cfg.modulations) {
    for (const cd rho : cfg.rho) {
      const KmsModel model(rho);
      const double lambda = lambda_kms(model);
      for (const double beta : cfg.beta) {
        const std::string series = mod.label() + " " + rho_tag(rho) + " beta=" + short_number(beta);
        for (const double db : cfg.snr_db) {
          const double eta = db_to_linear(db);
          const auto opt = asymptotic_sep_kms_optimal(mod.kind, mod.m, model, beta, eta);
          const auto uni = asymptotic_sep_uniform_kms(mod.kind, mod.m, model, beta, eta);
          table.add_row({series, mod.label(), std::abs(rho), beta, db, lambda, opt.value, uni.value,
                         (opt.saturated || uni.saturated) ? 1.0 : 0.0});
        }
      }
    }
  }
  return table;
}

Table run_convergence(const ExperimentConfig& cfg) {
  Table table({"series", "modulation", "rho_mag", "beta", "snr_db", "n_t", "n_r", "exact_sep", "limit_sep",
               "rel_err"});
  // The optimal branch argument depends on (rho, N_t) only.
  std::map<std::pair<std::size_t, std::size_t>, double> argument;
  for (std::size_t ri = 0; ri < cfg.rho.size(); ++ri) {
    for (const std::size_t n_t : cfg.n_t) argument[{ri, n_t}] = optimal_branch_argument(kms_sigma(cfg.rho[ri], n_t));
  }
  for (const auto& mod : cfg.modulations) {
    for (std::size_t ri = 0; ri < cfg.rho.size(); ++ri) {
      const cd rho = cfg.rho[ri];
      const KmsModel model(rho);
      for (const double beta : cfg.beta) {
        for (const double db : cfg.snr_db) {
          const double eta = db_to_linear(db);
          const double limit = asymptotic_sep_kms_optimal(mod.kind, mod.m, model, beta, eta).value;
          const std::string series =
              mod.label() + " " + rho_tag(rho) + " beta=" + short_number(beta) + " snr=" + short_number(db) + "dB";
          for (const std::size_t n_t : cfg.n_t) {
            const auto n_r = static_cast<std::size_t>(std::llround(beta * static_cast<double>(n_t)));
            const GFunctionSpec spec(mod.kind, mod.m, SystemDims(n_t, n_r, eta));
            const double exact = g_value(spec, argument.at({ri, n_t}));
            table.add_row({series, mod.label(), std::abs(rho), beta, db, double(n_t), double(n_r), exact, limit,
                           relative(exact, limit)});
          }
        }
      }
    }
  }
  return table;
}

Table run_snr_dist(const ExperimentConfig& cfg, unsigned workers) {
  Table table({"series", "n_t", "n_r", "rho_mag", "snr_db", "bin_lo", "bin_hi", "bin_center", "density",
               "gaussian_density", "empirical_mean", "empirical_var", "approx_mean", "approx_var", "exact_mean"});
  std::uint64_t group = 0;
  for (const cd rho : cfg.rho) {
    const KmsModel model(rho);
    const double lambda = lambda_kms(model);
    for (const auto& [n_t, n_r] : cfg.antenna_pairs()) {
      const CMatrix sigma = kms_sigma(rho, n_t);
      const Precoder f = optimal_precoder(sigma);
      for (const double db : cfg.snr_db) {
        const SystemDims dims(n_t, n_r, db_to_linear(db));
        const std::vector<double> tau =
            collect_branch_snr(sigma, f, n_r, dims.eta, cfg.draws, derive_seed(cfg.seed, group++), workers);
        const double n = static_cast<double>(tau.size());
        double mean = 0.0;
        for (const double t : tau) mean += t;
        mean /= n;
        double ss = 0.0;
        for (const double t : tau) ss += (t - mean) * (t - mean);
        const double var = ss / (n - 1.0);

        const auto approx = snr_gaussian_approx(AsymptoticParams(dims.beta(), dims.eta, lambda), n_t);
        const auto exact = snr_exact_moments(sigma, dims);
        const auto [lo_it, hi_it] = std::minmax_element(tau.begin(), tau.end());
        const double lo = *lo_it;
        const double width = std::max(*hi_it - lo, std::numeric_limits<double>::min()) / static_cast<double>(cfg.bins);
        std::vector<std::size_t> counts(cfg.bins, 0);
        for (const double t : tau) {
          const auto b = std::min(cfg.bins - 1, static_cast<std::size_t>((t - lo) / width));
          ++counts[b];
        }
        const std::string series = antenna_tag(n_t, n_r) + " " + rho_tag(rho) + " snr=" + short_number(db) + "dB";
        const double sd = std::sqrt(approx.variance);
        for (std::size_t b = 0; b < cfg.bins; ++b) {
          const double b_lo = lo + width * static_cast<double>(b);
          const double b_hi = b_lo + width;
          const double centre = 0.5 * (b_lo + b_hi);
          const double zc = (centre - approx.mean) / sd;
          const double gauss = std::exp(-0.5 * zc * zc) / (sd * std::sqrt(2.0 * std::numbers::pi));
          table.add_row({series, double(n_t), double(n_r), std::abs(rho), db, b_lo, b_hi, centre,
                         static_cast<double>(counts[b]) / (n * width), gauss, mean, var, approx.mean, approx.variance,
                         exact.mean});
        }
      }
    }
  }
  return table;
}

Table run_precoding_gain(const ExperimentConfig& cfg) {
  Table table({"rho_mag", "rho_phase", "lambda_kms", "gain", "gain_db"});
  for (const cd rho : cfg.rho) {
    const KmsModel model(rho);
    const double gain = asymptotic_precoding_gain(model);
    table.add_row({std::abs(rho), std::arg(rho), lambda_kms(model), gain, 10.0 * std::log10(gain)});
  }
  return table;
}

Table run_multiuser(const ExperimentConfig& cfg) {
  Table table({"series", "modulation", "users", "n_t", "n_r", "snr_db", "sep_optimal", "sep_uniform"});
  for (const auto& mod : cfg.modulations) {
    for (const auto& [n_t, n_r] : cfg.antenna_pairs()) {
      std::vector<CMatrix> sigmas;
      for (const cd rho : cfg.users) sigmas.push_back(kms_sigma(rho, n_t));
      const std::vector<Precoder> optimal = multiuser_precoder(sigmas);
      const std::vector<Precoder> uniform(cfg.users.size(), uniform_precoder(n_t));
      const std::string series = mod.label() + " K=" + std::to_string(cfg.users.size()) + " " + antenna_tag(n_t, n_r);
      for (const double db : cfg.snr_db) {
        const SystemDims dims(n_t, n_r, db_to_linear(db));
        table.add_row({series, mod.label(), double(cfg.users.size()), double(n_t), double(n_r), db,
                       multiuser_avg_sep(optimal, sigmas, mod.kind, mod.m, dims),
                       multiuser_avg_sep(uniform, sigmas, mod.kind, mod.m, dims)});
      }
    }
  }
  return table;
}

Table run_experiment(const ExperimentConfig& cfg, unsigned workers) {
  switch (cfg.experiment) {
    case Experiment::SepCurve: return run_sep_curve(cfg);
    case Experiment::McValidate: return run_mc_validate(cfg, workers);
    case Experiment::Asymptote: return run_asymptote(cfg);
    case Experiment::Convergence: return run_convergence(cfg);
    case Experiment::SnrDist: return run_snr_dist(cfg, workers);
    case Experiment::PrecodingGain: return run_precoding_gain(cfg);
    case Experiment::Multiuser: return run_multiuser(cfg);
  }
  throw Error(ErrorKind::Config, "unknown experiment");
}

PlotSpec default_plot(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::SepCurve:
      return {"Average SEP vs SNR", "snr_db",
              {"analytic_optimal", "analytic_uniform", "asymptotic_optimal", "asymptotic_uniform"}, "series", true};
    case Experiment::McValidate:
      return {"Monte Carlo vs analytic SEP", "snr_db", {"analytic_sep", "mc_sep"}, "series", true};
    case Experiment::Asymptote:
      return {"Limit SEP vs SNR", "snr_db", {"limit_optimal", "limit_uniform"}, "series", true};
    case Experiment::Convergence:
      return {"Exact SEP vs N_t and its limit", "n_t", {"exact_sep", "limit_sep"}, "series", true};
    case Experiment::SnrDist:
      return {"Per-branch SNR distribution", "bin_center", {"density", "gaussian_density"}, "series", false};
    case Experiment::PrecodingGain:
      return {"Limiting SNR gain of optimal over uniform precoding", "rho_mag", {"gain_db"}, "", false};
    case Experiment::Multiuser:
      return {"Multiuser average SEP vs SNR", "snr_db", {"sep_optimal", "sep_uniform"}, "series", true};
  }
  throw Error(ErrorKind::Config, "unknown experiment");
}

}  // namespace mimosep
