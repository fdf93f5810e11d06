#pragma once

// Tabular results and their CSV / JSON serializations. Numbers are written
// with 17 significant digits in scientific notation so every double
// round-trips and identical runs give identical bytes.

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace realclock::cli {

using Cell = std::variant<double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

struct Report {
  std::string command;
  nlohmann::json config;
  std::vector<Table> tables;  ///< first table is the primary output
};

enum class Format { csv, json };

Format parse_format(std::string_view text);
std::string_view format_name(Format f) noexcept;

/// Fixed layout d.dddddddddddddddde+XX; nan and inf spelled out.
std::string format_number(double v);

void write_csv(std::ostream& out, const Report& report);
void write_json(std::ostream& out, const Report& report);
void write_report(std::ostream& out, const Report& report, Format format);

}  // namespace realclock::cli
