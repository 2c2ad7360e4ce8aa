#include "subexp/table.hpp"

#include <cstdio>
#include <stdexcept>

#include "nlohmann/json.hpp"

namespace subexp {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  // Prefer the shortest form that parses back to the same bits.
  for (int prec = 1; prec < 17; ++prec) {
    char probe[40];
    std::snprintf(probe, sizeof(probe), "%.*g", prec, x);
    double back = 0.0;
    std::sscanf(probe, "%lf", &back);
    if (back == x) return probe;
  }
  return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
  bool needs = s.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string render(const Cell& c) {
  if (std::holds_alternative<std::string>(c)) return csv_escape(std::get<std::string>(c));
  if (std::holds_alternative<double>(c)) return fmt_double(std::get<double>(c));
  return std::to_string(std::get<std::int64_t>(c));
}

}  // namespace

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("table: needs at least one column");
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    throw std::invalid_argument("table: row has " + std::to_string(row.size()) +
                                " cells, expected " + std::to_string(columns_.size()));
  rows_.push_back(std::move(row));
}

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (j) out += ',';
    out += csv_escape(columns_[j]);
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += render(row[j]);
    }
    out += '\n';
  }
  return out;
}

std::string Table::to_json(int indent) const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : rows_) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t j = 0; j < row.size(); ++j) {
      const Cell& c = row[j];
      if (std::holds_alternative<std::string>(c)) obj[columns_[j]] = std::get<std::string>(c);
      else if (std::holds_alternative<double>(c)) obj[columns_[j]] = std::get<double>(c);
      else obj[columns_[j]] = std::get<std::int64_t>(c);
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(indent) + "\n";
}

}  // namespace subexp
