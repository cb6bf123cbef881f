// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace mimosep {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point rule; nodes are open (never +/-1). Thread safe.
const GaussLegendreRule& gauss_legendre(std::size_t n);

/// Integral of f over [a, b] with the n-point rule.
template <class F>
double integrate_gl(F&& f, double a, double b, std::size_t n) {
  const GaussLegendreRule& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

/// (1/pi) * int_0^upper exp(-a / sin^2 t) dt for a >= 0, upper in (0, pi).
///
/// Integrates on geometrically graded panels toward t = 0 so the result stays
/// accurate to ~1e-15 absolute for every a, including a -> 0 where the
/// integrand switches from 0 to 1 over a width of order sqrt(a).
double craig_integral(double a, double upper);

}  // namespace mimosep
