// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace mimosep {

/// A cell is either text or a number; numbers print with 17 significant
/// digits so they round-trip exactly.
using Cell = std::variant<std::string, double>;

std::string format_number(double v);

class Table {
 public:
  explicit Table(std::vector<std::string> header);

  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
  std::size_t column(const std::string& name) const;

  /// Values of a column as numbers; text cells raise a Format error.
  std::vector<double> numeric_column(const std::string& name) const;

  void write_csv(std::ostream& out) const;
  std::string to_csv() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace mimosep
