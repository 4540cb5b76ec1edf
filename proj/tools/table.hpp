#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "config.hpp"

namespace lambda_pt::cli {

using Cell = std::variant<double, long long, bool, std::string>;

// Column-named rows written as CSV (header + rows) or as a JSON array of
// objects with the same keys.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  void write(std::ostream& os, OutputFormat format) const;
  void write_csv(std::ostream& os) const;
  void write_json(std::ostream& os) const;
};

// %.17g, the fixture-stable representation of a double.
std::string format_double(double x);

}  // namespace lambda_pt::cli
