#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace windcournot {

using Cell = std::variant<double, std::string>;

/// Column-ordered result table. Every row has exactly one cell per column.
class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  std::size_t column_index(const std::string& name) const;
  /// Numeric column; string cells read as NaN.
  std::vector<double> numeric_column(const std::string& name) const;

  /// Header row then one line per row, doubles printed with 17 significant
  /// digits.
  void write_csv(std::ostream& out) const;
  /// Array of objects keyed by column name; non-finite numbers become null.
  void write_json(std::ostream& out) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

std::string format_number(double value);

}  // namespace windcournot
