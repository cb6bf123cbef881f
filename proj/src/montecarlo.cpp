// SPDX-License-Identifier: Apache-2.0
#include "mimosep/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "mimosep/error.hpp"

namespace mimosep {

namespace {

constexpr double kMaxCondition = 1e12;
constexpr std::size_t kMinSymbols = 10000;

// Runs body(t) for t in [0, n) on contiguous chunks. body must only write
// state owned by trial t; the caller reduces afterwards in index order.
template <class Body>
void for_each_trial(std::size_t n, unsigned workers, const Body& body) {
  const std::size_t threads = std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    for (std::size_t t = 0; t < n; ++t) body(t);
    return;
  }
  std::vector<std::exception_ptr> failures(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    const std::size_t begin = n * w / threads;
    const std::size_t end = n * (w + 1) / threads;
    pool.emplace_back([&, w, begin, end] {
      try {
        for (std::size_t t = begin; t < end; ++t) body(t);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
}

void check_sizes(const CMatrix& sigma, const Precoder& f) {
  if (sigma.rows() != sigma.cols() || static_cast<std::size_t>(sigma.rows()) != f.size()) {
    throw Error(ErrorKind::Shape, "covariance and precoder sizes differ");
  }
}

}  // namespace

unsigned resolve_workers(unsigned workers) noexcept {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

ChannelSampler::ChannelSampler(const CMatrix& sigma, std::size_t n_r) : root_(hermitian_sqrt(sigma)), n_r_(n_r) {
  if (n_r == 0) throw Error(ErrorKind::Dimension, "N_r must be >= 1");
}

CMatrix ChannelSampler::draw_white(RngStream& stream) const {
  const auto rows = static_cast<Eigen::Index>(n_r_);
  const Eigen::Index cols = root_.rows();
  CMatrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = stream.complex_normal();
  }
  return g;
}

ChannelRealization ChannelSampler::draw(RngStream& stream) const { return {draw_white(stream) * root_}; }

ChannelRealization sample_channel(const CMatrix& sigma, std::size_t n_r, RngStream& stream) {
  return ChannelSampler(sigma, n_r).draw(stream);
}

ZfEqualizer::ZfEqualizer(const CMatrix& h, const CMatrix& f)
    : ZfEqualizer(h.cols() == f.rows() ? CMatrix(h * f)
                                       : throw Error(ErrorKind::Shape, "channel and precoder sizes differ")) {}

ZfEqualizer::ZfEqualizer(const CMatrix& a) {
  if (a.rows() < a.cols()) throw Error(ErrorKind::Rank, "effective channel has fewer rows than streams");
  // Only the lower triangle is formed; the solver reads nothing else.
  CMatrix gram = CMatrix::Zero(a.cols(), a.cols());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(a.adjoint());
  const Eigen::SelfAdjointEigenSolver<CMatrix> solver(gram);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::Convergence, "Gram eigensolver failed");
  const RVector& values = solver.eigenvalues();
  const double low = values(0);
  const double high = values(values.size() - 1);
  if (!(low > 0.0) || high > kMaxCondition * low) {
    std::ostringstream msg;
    msg << "effective channel is rank deficient (Gram eigenvalues " << low << " .. " << high << ")";
    throw Error(ErrorKind::Rank, msg.str());
  }
  inv_ = values.cwiseInverse();
  basis_ = solver.eigenvectors();
  inv_diag_ = basis_.cwiseAbs2() * inv_;
  a_ = a;
}

CVector ZfEqualizer::apply(const CVector& r) const {
  if (r.size() != a_.rows()) throw Error(ErrorKind::Shape, "received vector has the wrong length");
  const CVector projected = basis_.adjoint() * (a_.adjoint() * r);
  return basis_ * (inv_.asDiagonal() * projected);
}

CVector zf_equalize(const ChannelRealization& h, const Precoder& f, const CVector& r) {
  return ZfEqualizer(h.h, f.matrix()).apply(r);
}

RVector empirical_snr(const ChannelRealization& h, const Precoder& f, double eta) {
  const ZfEqualizer zf(h.h, f.matrix());
  return eta * zf.inverse_gram_diagonal().cwiseInverse();
}

SystemConfig::SystemConfig(Modulation kind_, unsigned m_, SystemDims dims_, CMatrix sigma_)
    : kind(kind_), m(m_), dims(dims_), sigma(std::move(sigma_)) {
  (void)Constellation::build(kind, m);
  if (sigma.rows() != sigma.cols() || static_cast<std::size_t>(sigma.rows()) != dims.n_t) {
    throw Error(ErrorKind::Dimension, "covariance order differs from N_t");
  }
}

SepEstimate simulate_sep(const SystemConfig& config, const Precoder& f, std::size_t n_symbols,
                         std::uint64_t seed, unsigned workers) {
  if (n_symbols < kMinSymbols) {
    throw Error(ErrorKind::Domain, "simulate_sep needs at least 10000 symbols");
  }
  check_sizes(config.sigma, f);
  const std::size_t n_t = config.dims.n_t;
  const std::size_t trials = (n_symbols + n_t - 1) / n_t;
  const Constellation constellation = Constellation::build(config.kind, config.m);
  const ChannelSampler sampler(config.sigma, config.dims.n_r);
  const double noise_sd = std::isinf(config.dims.eta) ? 0.0 : std::sqrt(1.0 / config.dims.eta);
  // H F = G (S^{1/2} F), so the transmit-side product is formed once.
  const CMatrix shaped = sampler.root() * f.matrix();

  std::vector<std::uint32_t> errors(trials, 0);
  for_each_trial(trials, workers, [&](std::size_t trial) {
    RngStream stream(seed, trial);
    const CMatrix a = sampler.draw_white(stream) * shaped;
    const std::vector<std::size_t> sent = random_symbols(n_t, constellation, stream);
    CVector s(static_cast<Eigen::Index>(n_t));
    for (std::size_t k = 0; k < n_t; ++k) s(static_cast<Eigen::Index>(k)) = constellation.point(sent[k]);
    CVector r = a * s;
    for (Eigen::Index i = 0; i < r.size(); ++i) r(i) += noise_sd * stream.complex_normal();
    const CVector est = ZfEqualizer(a).apply(r);
    std::uint32_t count = 0;
    for (std::size_t k = 0; k < n_t; ++k) {
      if (hard_decision(est(static_cast<Eigen::Index>(k)), constellation) != sent[k]) ++count;
    }
    errors[trial] = count;
  });

  std::size_t total_errors = 0;
  for (const std::uint32_t e : errors) total_errors += e;
  const std::size_t total = trials * n_t;
  const double p = static_cast<double>(total_errors) / static_cast<double>(total);
  return {p, total, total_errors, std::sqrt(p * (1.0 - p) / static_cast<double>(total))};
}

std::vector<double> collect_branch_snr(const CMatrix& sigma, const Precoder& f, std::size_t n_r, double eta,
                                       std::size_t n_draws, std::uint64_t seed, unsigned workers) {
  check_sizes(sigma, f);
  if (!(eta > 0.0) || std::isinf(eta)) throw Error(ErrorKind::Domain, "SNR eta must be positive and finite");
  const std::size_t n_t = f.size();
  const ChannelSampler sampler(sigma, n_r);
  const CMatrix shaped = sampler.root() * f.matrix();
  std::vector<double> out(n_draws * n_t);
  for_each_trial(n_draws, workers, [&](std::size_t draw) {
    RngStream stream(seed, draw);
    const RVector tau = eta * ZfEqualizer(sampler.draw_white(stream) * shaped).inverse_gram_diagonal().cwiseInverse();
    std::copy(tau.data(), tau.data() + tau.size(), out.begin() + static_cast<std::ptrdiff_t>(draw * n_t));
  });
  return out;
}

ChiSquareReport chi_square_check(const CMatrix& sigma, const Precoder& f, std::size_t n_r, std::size_t n_draws,
                                 std::uint64_t seed, unsigned workers) {
  check_sizes(sigma, f);
  const std::size_t n_t = f.size();
  if (n_r < n_t) throw Error(ErrorKind::Dimension, "chi-square check needs N_r >= N_t");
  if (n_draws < 2) throw Error(ErrorKind::Domain, "chi-square check needs at least two draws");
  const RVector reference = inverse_gram_diagonal(f.matrix(), sigma);
  const ChannelSampler sampler(sigma, n_r);
  const CMatrix shaped = sampler.root() * f.matrix();

  std::vector<double> gamma(n_draws * n_t);
  for_each_trial(n_draws, workers, [&](std::size_t draw) {
    RngStream stream(seed, draw);
    const ZfEqualizer zf(sampler.draw_white(stream) * shaped);
    const RVector& diag = zf.inverse_gram_diagonal();
    for (std::size_t k = 0; k < n_t; ++k) {
      const auto i = static_cast<Eigen::Index>(k);
      gamma[draw * n_t + k] = reference(i) / diag(i);
    }
  });

  const double d = static_cast<double>(n_draws);
  const double nt = static_cast<double>(n_t);
  // Per-draw averages of g and g^2 are the independent units.
  std::vector<double> first(n_draws), second(n_draws);
  for (std::size_t draw = 0; draw < n_draws; ++draw) {
    double a = 0.0, b = 0.0;
    for (std::size_t k = 0; k < n_t; ++k) {
      const double g = gamma[draw * n_t + k];
      a += g;
      b += g * g;
    }
    first[draw] = a / nt;
    second[draw] = b / nt;
  }
  double mean = 0.0, raw2 = 0.0;
  for (std::size_t draw = 0; draw < n_draws; ++draw) {
    mean += first[draw];
    raw2 += second[draw];
  }
  mean /= d;
  raw2 /= d;
  const double pooled = d * nt;
  const double variance = (raw2 - mean * mean) * pooled / (pooled - 1.0);

  // Delta method: the variance estimate moves like mean of (g^2 - 2 m g).
  double ss_mean = 0.0, ss_var = 0.0;
  double lin_mean = 0.0;
  for (std::size_t draw = 0; draw < n_draws; ++draw) lin_mean += second[draw] - 2.0 * mean * first[draw];
  lin_mean /= d;
  for (std::size_t draw = 0; draw < n_draws; ++draw) {
    ss_mean += (first[draw] - mean) * (first[draw] - mean);
    const double lin = second[draw] - 2.0 * mean * first[draw] - lin_mean;
    ss_var += lin * lin;
  }

  ChiSquareReport report;
  report.expected = static_cast<double>(n_r - n_t + 1);
  report.mean = mean;
  report.variance = variance;
  report.mean_err = mean - report.expected;
  report.var_err = variance - report.expected;
  report.mean_std_err = std::sqrt(ss_mean / (d - 1.0) / d);
  report.var_std_err = std::sqrt(ss_var / (d - 1.0) / d);
  report.n_draws = n_draws;
  report.branch_mean.assign(n_t, 0.0);
  report.branch_std_err.assign(n_t, 0.0);
  for (std::size_t k = 0; k < n_t; ++k) {
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t draw = 0; draw < n_draws; ++draw) {
      const double g = gamma[draw * n_t + k];
      sum += g;
      sum2 += g * g;
    }
    const double m = sum / d;
    const double var = std::max(0.0, (sum2 - d * m * m) / (d - 1.0));
    report.branch_mean[k] = m;
    report.branch_std_err[k] = std::sqrt(var / d);
  }
  return report;
}

}  // namespace mimosep
