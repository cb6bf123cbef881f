// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mimosep {

class RngStream;

enum class Modulation { Pam, Psk, Qam };

std::string_view to_string(Modulation kind) noexcept;
/// Accepts "PAM", "PSK", "QAM" in any case.
Modulation parse_modulation(std::string_view text);

/// Unit-average-energy, zero-mean M-ary point set.
class Constellation {
 public:
  static Constellation build(Modulation kind, unsigned m);

  Modulation kind() const noexcept { return kind_; }
  unsigned order() const noexcept { return static_cast<unsigned>(points_.size()); }
  const std::vector<std::complex<double>>& points() const noexcept { return points_; }
  std::complex<double> point(std::size_t index) const { return points_.at(index); }

  /// Minimum Euclidean distance between distinct points.
  double min_distance() const;

  /// e.g. "16-QAM".
  std::string label() const;

 private:
  Constellation(Modulation kind, std::vector<std::complex<double>> points)
      : kind_(kind), points_(std::move(points)) {}

  Modulation kind_;
  std::vector<std::complex<double>> points_;
};

/// Nearest point by Euclidean distance; ties go to the lowest index.
std::size_t hard_decision(std::complex<double> y, const Constellation& c);

/// n independent uniform indices in [0, M).
std::vector<std::size_t> random_symbols(std::size_t n, const Constellation& c, RngStream& stream);

}  // namespace mimosep
