#include "table.hpp"

#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace lambda_pt::cli {

std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("Table::add_row: column count mismatch");
  rows.push_back(std::move(row));
}

void Table::write(std::ostream& os, OutputFormat format) const {
  if (format == OutputFormat::Csv) {
    write_csv(os);
  } else {
    write_json(os);
  }
}

void Table::write_csv(std::ostream& os) const {
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>) {
              os << format_double(x);
            } else if constexpr (std::is_same_v<T, bool>) {
              os << (x ? "true" : "false");
            } else {
              os << x;
            }
          },
          row[c]);
    }
    os << '\n';
  }
}

void Table::write_json(std::ostream& os) const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::visit([&](const auto& x) { obj[columns[c]] = x; }, row[c]);
    }
    arr.push_back(std::move(obj));
  }
  os << arr.dump(2) << '\n';
}

}  // namespace lambda_pt::cli
