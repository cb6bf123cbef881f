#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mimosep/asymptotics.hpp"
#include "mimosep/error.hpp"
#include "mimosep/montecarlo.hpp"
#include "mimosep/precoder.hpp"
#include "oracles.hpp"

using namespace mimosep;

namespace {

constexpr double kPi = std::numbers::pi;

// KMS symbol summed straight from its Fourier series,
// (1 - r^2) / (1 - 2 r cos(w + phase) + r^2).
std::function<double(double)> kms_symbol(cd rho) {
  return [rho](double w) {
    const double r = std::abs(rho);
    return (1.0 - r * r) / (1.0 - 2.0 * r * std::cos(w + std::arg(rho)) + r * r);
  };
}

double partial_lambda(cd rho, int n) {
  const Eigen::VectorXd ev = oracle::eigenvalues(oracle::kms(rho, n));
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += 1.0 / std::sqrt(ev(i));
  return s / n;
}

const Modulation kKinds[] = {Modulation::Pam, Modulation::Psk, Modulation::Qam};
const unsigned kOrders[] = {4, 8, 16};

}  // namespace

TEST_CASE("Szego functional") {
  const auto identity = [](double v) { return v; };
  CHECK(szego_functional([](double) { return 2.5; }, identity) == doctest::Approx(2.5).epsilon(1e-14));
  for (const cd rho : {cd(0.3), std::polar(0.5, 0.5), std::polar(0.9, -2.0)}) {
    CHECK(szego_functional(kms_symbol(rho), identity) == doctest::Approx(1.0).epsilon(1e-10));
  }
  const auto inv_root = [](double v) { return 1.0 / std::sqrt(v); };
  const double partial = partial_lambda(0.5, 512);
  CHECK(std::abs(szego_functional(kms_symbol(0.5), inv_root) - partial) / partial < 0.01);
  CHECK_THROWS_AS(szego_functional([](double w) { return std::cos(w); }, identity), Error);
}

TEST_CASE("Lambda of a symbol") {
  CHECK(lambda_limit([](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(lambda_limit(kms_symbol(0.5)) - lambda_kms(KmsModel(0.5))) < 1e-8);
  double prev = 0.0;
  for (const double r : {0.0, 0.25, 0.5, 0.75, 0.9}) {
    const double lam = lambda_limit(kms_symbol(std::polar(r, 0.5)));
    CHECK(lam >= 1.0 - 1e-14);
    CHECK(lam > prev);
    prev = lam;
  }
}

TEST_CASE("complete elliptic integral of the second kind") {
  CHECK(elliptic_e(0.0) == kPi / 2.0);
  CHECK(elliptic_e(1.0) == 1.0);
  CHECK(std::abs(elliptic_e(0.5) - 1.467462) < 1e-6);
  for (const double k : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
    CAPTURE(k);
    CHECK(std::abs(elliptic_e(k) - oracle::elliptic_e_trapezoid(k)) < 1e-12);
  }
  double prev = elliptic_e(0.0);
  for (int i = 1; i <= 100; ++i) {
    const double e = elliptic_e(i / 100.0);
    CHECK(e < prev);
    prev = e;
  }
  CHECK_THROWS_AS(elliptic_e(-0.01), Error);
  CHECK_THROWS_AS(elliptic_e(1.01), Error);
}

TEST_CASE("closed-form KMS Lambda") {
  CHECK(lambda_kms(KmsModel(0.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lambda_kms(KmsModel(0.5)) == lambda_kms(KmsModel(std::polar(0.5, 0.5))));
  CHECK(std::abs(lambda_kms(KmsModel(0.75)) - lambda_limit(kms_symbol(0.75))) < 1e-8);
  for (const double r : {0.1, 0.5, 0.9}) {
    const double limit = lambda_kms(KmsModel(std::polar(r, 0.5)));
    const double rel = std::abs(partial_lambda(std::polar(r, 0.5), 512) - limit) / limit;
    CAPTURE(r);
    CHECK(rel <= (r < 0.8 ? 0.01 : 0.03));
  }
}

TEST_CASE("asymptotic SEP under optimal precoding") {
  const AsymptoticSep p = asymptotic_sep_optimal(Modulation::Pam, 2, AsymptoticParams(2.0, 4.5, 1.0));
  CHECK(std::abs(p.value - oracle::q(3.0)) < 1e-7);
  CHECK_FALSE(p.saturated);

  for (int i = 0; i < 3; ++i) {
    for (const double eta : {1.0, 10.0, 100.0}) {
      const double a = asymptotic_sep_optimal(kKinds[i], kOrders[i], AsymptoticParams(2.0, eta, 1.0)).value;
      const double b = asymptotic_sep_uniform_kms(kKinds[i], kOrders[i], KmsModel(0.0), 2.0, eta).value;
      CHECK(std::abs(a - b) < 1e-12);
    }
  }

  const double eta = std::pow(10.0, 1.2);
  const KmsModel model(std::polar(0.5, 0.5));
  const double limit = asymptotic_sep_kms_optimal(Modulation::Qam, 16, model, 2.0, eta).value;
  const CMatrix sigma = materialize(kms_covariance(model, 128));
  const double finite = min_avg_sep(sigma, GFunctionSpec(Modulation::Qam, 16, SystemDims(128, 256, eta)));
  CHECK(std::abs(finite - limit) / limit < 0.05);

  CHECK_THROWS_AS(AsymptoticParams(1.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(AsymptoticParams(2.0, 0.0, 1.0), Error);
  CHECK_THROWS_AS(AsymptoticParams(2.0, 1.0, 0.0), Error);
}

TEST_CASE("KMS closed form agrees with the generic limit") {
  for (int i = 0; i < 3; ++i) {
    for (const double r : {0.0, 0.1, 0.5, 0.75, 0.9}) {
      const KmsModel model(std::polar(r, 1.0));
      const double a = asymptotic_sep_kms_optimal(kKinds[i], kOrders[i], model, 2.0, 20.0).value;
      const double b =
          asymptotic_sep_optimal(kKinds[i], kOrders[i], AsymptoticParams(2.0, 20.0, lambda_kms(model))).value;
      CHECK(std::abs(a - b) < 1e-12);
    }
    double prev = 0.0;
    for (const double r : {0.1, 0.5, 0.75}) {
      const double v = asymptotic_sep_kms_optimal(kKinds[i], kOrders[i], KmsModel(r), 2.0, 20.0).value;
      CHECK(v > prev);
      prev = v;
    }
  }
  const double eta = 3.0, beta = 1.5;
  CHECK(asymptotic_sep_kms_optimal(Modulation::Pam, 2, KmsModel(0.0), beta, eta).value ==
        doctest::Approx(oracle::q(std::sqrt(2.0 * eta * (beta - 1.0)))).epsilon(1e-10));
}

TEST_CASE("uniform limit") {
  for (double r = 0.05; r <= 0.9 + 1e-12; r += 0.05) {
    for (double eta = 1.0; eta <= 100.0; eta *= 1.5) {
      const KmsModel model(r);
      CHECK(asymptotic_sep_uniform_kms(Modulation::Qam, 16, model, 2.0, eta).value >=
            asymptotic_sep_kms_optimal(Modulation::Qam, 16, model, 2.0, eta).value);
    }
  }

  const double eta = std::pow(10.0, 1.2);
  const KmsModel model(0.5);
  const double limit = asymptotic_sep_uniform_kms(Modulation::Qam, 16, model, 2.0, eta).value;
  // Diagonal of the tridiagonal KMS inverse: corners 1/(1-r^2), interior (1+r^2)/(1-r^2),
  // each scaled by N_t for the uniform precoder.
  const int n = 128;
  const double r2 = 0.25;
  const GFunctionSpec spec(Modulation::Qam, 16, SystemDims(n, 2 * n, eta));
  const double corner = g_value(spec, n / (1.0 - r2));
  const double interior = g_value(spec, n * (1.0 + r2) / (1.0 - r2));
  const double finite = (2.0 * corner + (n - 2) * interior) / n;
  CHECK(std::abs(finite - limit) / limit < 0.05);
  const CMatrix sigma = materialize(kms_covariance(model, n));
  CHECK(avg_sep(uniform_precoder(n), sigma, spec) == doctest::Approx(finite).epsilon(1e-9));
}

TEST_CASE("limit SEP is a probability decreasing in eta and beta") {
  for (int i = 0; i < 3; ++i) {
    const KmsModel model(std::polar(0.5, 0.5));
    double prev = 1.0;
    for (double eta = 0.5; eta <= 200.0; eta *= 1.4) {
      const double v = asymptotic_sep_kms_optimal(kKinds[i], kOrders[i], model, 2.0, eta).value;
      CHECK(v > 0.0);
      CHECK(v < prev);
      prev = v;
    }
    prev = 1.0;
    for (const double beta : {1.1, 1.5, 2.0, 3.0, 4.0}) {
      const double v = asymptotic_sep_uniform_kms(kKinds[i], kOrders[i], model, beta, 10.0).value;
      CHECK(v > 0.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("finite-N minimum SEP approaches the limit") {
  const double eta = std::pow(10.0, 1.2);
  const KmsModel model(std::polar(0.5, 0.5));
  for (int i = 0; i < 3; ++i) {
    const double limit = asymptotic_sep_kms_optimal(kKinds[i], kOrders[i], model, 2.0, eta).value;
    double prev = INFINITY;
    for (const int n : {16, 32, 64, 128}) {
      const CMatrix sigma = materialize(kms_covariance(model, n));
      const double finite = min_avg_sep(sigma, GFunctionSpec(kKinds[i], kOrders[i], SystemDims(n, 2 * n, eta)));
      const double rel = std::abs(finite - limit) / limit;
      CAPTURE(n);
      CHECK(rel < prev);
      prev = rel;
    }
  }
}

TEST_CASE("saturation") {
  const AsymptoticSep s = asymptotic_sep_optimal(Modulation::Pam, 2, AsymptoticParams(2.0, 1e5, 1.0));
  CHECK(s.value == 0.0);
  CHECK(s.saturated);
  const AsymptoticSep q = sep_at_limit_snr(Modulation::Qam, 16, 1e6);
  CHECK(q.value == 0.0);
  CHECK(q.saturated);
}

TEST_CASE("SEP at the limit SNR") {
  CHECK(sep_at_limit_snr(Modulation::Pam, 4, 10.0).value ==
        doctest::Approx(1.5 * oracle::q(std::sqrt(6.0 * 10.0 / 15.0))).epsilon(1e-12));
  const double z = std::sqrt(3.0 * 20.0 / 15.0);
  const double a = 4.0 * (1.0 - 0.25);
  CHECK(sep_at_limit_snr(Modulation::Qam, 16, 20.0).value ==
        doctest::Approx(a * oracle::q(z) - 4.0 * 0.75 * 0.75 * oracle::q(z) * oracle::q(z)).epsilon(1e-12));
  // QPSK and 4-QAM are the same constellation.
  CHECK(sep_at_limit_snr(Modulation::Psk, 4, 7.0).value ==
        doctest::Approx(sep_at_limit_snr(Modulation::Qam, 4, 7.0).value).epsilon(1e-12));
}

TEST_CASE("SNR limit and Gaussian approximation") {
  CHECK(snr_limit(AsymptoticParams(2.0, 10.0, 1.0)) == doctest::Approx(10.0));
  CHECK(snr_limit(AsymptoticParams(2.0, 20.0, 1.3)) == doctest::Approx(2.0 * snr_limit(AsymptoticParams(2.0, 10.0, 1.3))));
  CHECK(snr_limit(AsymptoticParams(3.0, 10.0, 1.3)) == doctest::Approx(2.0 * snr_limit(AsymptoticParams(2.0, 10.0, 1.3))));

  const SnrMoments unit = snr_gaussian_approx(AsymptoticParams(2.0, 1.0, 1.0), 1);
  CHECK(unit.mean == doctest::Approx(1.0));
  CHECK(unit.variance == doctest::Approx(1.0));
  const AsymptoticParams p(2.5, 30.0, 1.2);
  CHECK(snr_gaussian_approx(p, 20).variance == doctest::Approx(2.0 * snr_gaussian_approx(p, 40).variance));
}

TEST_CASE("exact SNR moments") {
  const SnrMoments white = snr_exact_moments(CMatrix::Identity(8, 8), SystemDims(8, 20, 5.0));
  CHECK(white.mean == doctest::Approx(13.0 * 5.0 / 8.0).epsilon(1e-12));
  CHECK(white.variance == doctest::Approx(13.0 * 25.0 / 64.0).epsilon(1e-12));

  const KmsModel model(0.5);
  const double limit = snr_limit(AsymptoticParams(2.0, 10.0, lambda_kms(model)));
  double prev_gap = INFINITY, prev_var = INFINITY;
  for (const int n : {16, 64, 256}) {
    const SnrMoments m = snr_exact_moments(materialize(kms_covariance(model, n)), SystemDims(n, 2 * n, 10.0));
    const double gap = std::abs(m.mean - limit);
    CHECK(gap < prev_gap);
    CHECK(m.variance < prev_var);
    prev_gap = gap;
    prev_var = m.variance;
  }
  CHECK(prev_gap / limit < 0.01);

  CMatrix bad = CMatrix::Identity(4, 4);
  bad(2, 2) = -1.0;
  CHECK_THROWS_AS(snr_exact_moments(bad, SystemDims(4, 8, 1.0)), Error);
}

TEST_CASE("exact SNR moments match simulation") {
  const int n = 16;
  const CMatrix sigma = materialize(kms_covariance(KmsModel(0.5), n));
  const Precoder f = optimal_precoder(sigma);
  const std::size_t draws = 4000;
  const std::vector<double> snr = collect_branch_snr(sigma, f, 32, 10.0, draws, 5, 0);
  // One draw is the independent unit: average within each draw first.
  std::vector<double> per_draw(draws, 0.0);
  double mean = 0.0;
  for (std::size_t d = 0; d < draws; ++d) {
    for (int k = 0; k < n; ++k) per_draw[d] += snr[d * n + k] / n;
    mean += per_draw[d] / draws;
  }
  double spread = 0.0;
  for (const double v : per_draw) spread += (v - mean) * (v - mean);
  const double se = std::sqrt(spread / (draws - 1) / draws);
  const SnrMoments exact = snr_exact_moments(sigma, SystemDims(n, 32, 10.0));
  CHECK(std::abs(mean - exact.mean) < 3.0 * se);

  double var = 0.0;
  for (const double v : snr) var += (v - mean) * (v - mean);
  var /= static_cast<double>(snr.size() - 1);
  CHECK(std::abs(var - exact.variance) / exact.variance < 0.1);
}

TEST_CASE("asymptotic precoding gain") {
  CHECK(asymptotic_precoding_gain(KmsModel(0.0)) == doctest::Approx(1.0).epsilon(1e-14));
  double prev = 1.0;
  for (int i = 1; i <= 9; ++i) {
    const double g = asymptotic_precoding_gain(KmsModel(std::polar(i / 10.0, 0.5)));
    CHECK(g > prev);
    prev = g;
  }
  const KmsModel model(0.5);
  const double optimal = snr_limit(AsymptoticParams(2.0, 7.0, lambda_kms(model)));
  const double uniform = 7.0 * (2.0 - 1.0) * (1.0 - 0.25) / (1.0 + 0.25);
  CHECK(asymptotic_precoding_gain(model) == doctest::Approx(optimal / uniform).epsilon(1e-12));
}
