// SPDX-License-Identifier: Apache-2.0
#include "mimosep/constellation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "mimosep/error.hpp"
#include "mimosep/rng.hpp"

namespace mimosep {

std::string_view to_string(Modulation kind) noexcept {
  switch (kind) {
    case Modulation::Pam: return "PAM";
    case Modulation::Psk: return "PSK";
    case Modulation::Qam: return "QAM";
  }
  return "?";
}

Modulation parse_modulation(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
  if (upper == "PAM") return Modulation::Pam;
  if (upper == "PSK") return Modulation::Psk;
  if (upper == "QAM") return Modulation::Qam;
  throw Error(ErrorKind::Config, "unknown modulation '" + std::string(text) + "' (expected PAM, PSK or QAM)");
}

Constellation Constellation::build(Modulation kind, unsigned m) {
  if (m < 2) throw Error(ErrorKind::InvalidOrder, "constellation order must be >= 2");
  std::vector<std::complex<double>> points;
  points.reserve(m);
  switch (kind) {
    case Modulation::Pam: {
      const double dm = static_cast<double>(m);
      const double c = std::sqrt(3.0 / (dm * dm - 1.0));
      for (unsigned i = 0; i < m; ++i) {
        points.emplace_back((2.0 * i - dm + 1.0) * c, 0.0);
      }
      break;
    }
    case Modulation::Psk:
      for (unsigned k = 0; k < m; ++k) {
        points.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / m));
      }
      break;
    case Modulation::Qam: {
      const auto side = static_cast<unsigned>(std::llround(std::sqrt(static_cast<double>(m))));
      if (m < 4 || side * side != m) {
        throw Error(ErrorKind::InvalidOrder, "square QAM needs M = 4, 16, 64, ... (got " + std::to_string(m) + ")");
      }
      const double scale = std::sqrt(3.0 / (2.0 * (m - 1.0)));
      const double ds = static_cast<double>(side);
      for (unsigned i = 0; i < side; ++i) {
        for (unsigned q = 0; q < side; ++q) {
          points.emplace_back((2.0 * i - ds + 1.0) * scale, (2.0 * q - ds + 1.0) * scale);
        }
      }
      break;
    }
  }
  return Constellation(kind, std::move(points));
}

double Constellation::min_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      best = std::min(best, std::abs(points_[i] - points_[j]));
    }
  }
  return best;
}

std::string Constellation::label() const {
  return std::to_string(order()) + "-" + std::string(to_string(kind_));
}

std::size_t hard_decision(std::complex<double> y, const Constellation& c) {
  const auto& pts = c.points();
  std::size_t best = 0;
  double best_dist = std::norm(y - pts[0]);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double d = std::norm(y - pts[i]);
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  return best;
}

std::vector<std::size_t> random_symbols(std::size_t n, const Constellation& c, RngStream& stream) {
  std::vector<std::size_t> out(n);
  for (auto& idx : out) idx = static_cast<std::size_t>(stream.below(c.order()));
  return out;
}

}  // namespace mimosep
