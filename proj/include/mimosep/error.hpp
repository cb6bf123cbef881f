// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mimosep {

enum class ErrorKind {
  InvalidCorrelation,
  Domain,
  Dimension,
  Shape,
  Rank,
  Convergence,
  InvalidOrder,
  NonpositivePsd,
  Numerical,
  Format,
  Config,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidCorrelation: return "invalid-correlation";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Rank: return "rank";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::InvalidOrder: return "invalid-order";
    case ErrorKind::NonpositivePsd: return "nonpositive-psd";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Format: return "format";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

}  // namespace mimosep
