// SPDX-License-Identifier: Apache-2.0
//
// Minimal static line plots of result tables.
#pragma once

#include <string>
#include <vector>

#include "mimosep/csv.hpp"

namespace mimosep {

struct PlotSpec {
  std::string title;
  std::string x_column;
  std::vector<std::string> y_columns;
  /// Optional text column; rows sharing a value form one series per y column.
  std::string series_column;
  bool log_y = false;
};

/// Floor applied to non-positive values on a log axis.
inline constexpr double kLogFloor = 1e-300;

/// Standalone SVG with one polyline per (series, y column). Output is a pure
/// function of the inputs. Needs at least two rows; throws Format when a
/// plotted column holds text.
std::string render_svg(const Table& table, const PlotSpec& spec);

}  // namespace mimosep
