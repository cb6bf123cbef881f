// SPDX-License-Identifier: Apache-2.0
#include "mimosep/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "mimosep/error.hpp"

namespace mimosep {

namespace {

GaussLegendreRule build_rule(std::size_t n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double dk = static_cast<double>(k);
        const double p2 = ((2.0 * dk - 1.0) * x * p1 - (dk - 1.0) * p0) / dk;
        p0 = p1;
        p1 = p2;
      }
      derivative = dn * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / derivative;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

constexpr std::size_t kPanelNodes = 24;
constexpr int kMaxPanels = 64;
// exp(-745) underflows to zero in double precision.
constexpr double kUnderflowExponent = 745.0;

double graded_craig(double a, double upper) {
  auto integrand = [a](double t) {
    const double s = std::sin(t);
    return std::exp(-a / (s * s));
  };
  double sum = 0.0;
  double hi = upper;
  for (int panel = 0; panel < kMaxPanels; ++panel) {
    const double lo = 0.5 * hi;
    const double s = std::sin(hi);
    if (a / (s * s) > kUnderflowExponent) return sum;
    sum += integrate_gl(integrand, lo, hi, kPanelNodes);
    hi = lo;
  }
  // Whatever is left lies in [0, upper * 2^-64]; bounded by its width.
  return sum + integrate_gl(integrand, 0.0, hi, kPanelNodes);
}

}  // namespace

const GaussLegendreRule& gauss_legendre(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::Domain, "Gauss-Legendre rule needs at least one node");
  static std::mutex mutex;
  static std::map<std::size_t, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double craig_integral(double a, double upper) {
  if (!(a >= 0.0)) throw Error(ErrorKind::Domain, "Craig integral needs a non-negative exponent");
  if (!(upper > 0.0 && upper < std::numbers::pi)) {
    throw Error(ErrorKind::Domain, "Craig integral upper limit must lie in (0, pi)");
  }
  if (a == 0.0) return upper / std::numbers::pi;
  constexpr double half_pi = std::numbers::pi / 2.0;
  double total;
  if (upper <= half_pi) {
    total = graded_craig(a, upper);
  } else {
    // The integrand is symmetric about pi/2.
    const double quarter = graded_craig(a, half_pi);
    total = 2.0 * quarter - graded_craig(a, std::numbers::pi - upper);
  }
  return total / std::numbers::pi;
}

}  // namespace mimosep
