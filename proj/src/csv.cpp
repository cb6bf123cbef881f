// SPDX-License-Identifier: Apache-2.0
#include "mimosep/csv.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "mimosep/error.hpp"

namespace mimosep {

namespace {

std::string quote(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (const char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Table::Table(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw Error(ErrorKind::Format, "table needs at least one column");
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != header_.size()) {
    throw Error(ErrorKind::Format, "row has " + std::to_string(row.size()) + " cells, header has " +
                                       std::to_string(header_.size()));
  }
  rows_.push_back(std::move(row));
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  throw Error(ErrorKind::Format, "no column named '" + name + "'");
}

std::vector<double> Table::numeric_column(const std::string& name) const {
  const std::size_t idx = column(name);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) {
    const double* v = std::get_if<double>(&row[idx]);
    if (v == nullptr) throw Error(ErrorKind::Format, "column '" + name + "' is not numeric");
    out.push_back(*v);
  }
  return out;
}

void Table::write_csv(std::ostream& out) const {
  for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << quote(header_[i]);
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (const double* v = std::get_if<double>(&row[i])) {
        out << format_number(*v);
      } else {
        out << quote(std::get<std::string>(row[i]));
      }
    }
    out << '\n';
  }
}

std::string Table::to_csv() const {
  std::ostringstream out;
  write_csv(out);
  return out.str();
}

}  // namespace mimosep
