#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace subexp {

/// Shortest stable decimal rendering that round-trips a double. C locale,
/// '.' separator, used everywhere numbers end up in files.
std::string fmt_double(double x);

using Cell = std::variant<std::string, double, std::int64_t>;

/**
 * A rectangular result table. Rendering is deterministic: same cells, same
 * bytes. CSV output has a header row, LF line ends, and RFC-style quoting
 * applied only where a cell needs it.
 */
class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  void add_row(std::vector<Cell> row);
  std::size_t row_count() const noexcept { return rows_.size(); }
  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

  std::string to_csv() const;
  /// Array of one object per row, keyed by column names.
  std::string to_json(int indent = 2) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace subexp
