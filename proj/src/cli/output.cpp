#include "realclock/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "realclock/errors.hpp"

namespace realclock::cli {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw Error("table '" + name + "': row width does not match the header");
  }
  rows.push_back(std::move(row));
}

Format parse_format(std::string_view text) {
  if (text == "csv") {
    return Format::csv;
  }
  if (text == "json") {
    return Format::json;
  }
  throw ValidationError("output format must be csv or json, got '" + std::string(text) + "'");
}

std::string_view format_name(Format f) noexcept { return f == Format::csv ? "csv" : "json"; }

std::string format_number(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  if (v == 0.0) {
    v = 0.0;  // drop the sign of negative zero
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
  return std::string(buf, res.ptr);
}

namespace {

void write_cell(std::ostream& out, const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) {
    out << format_number(*d);
  } else {
    out << std::get<std::string>(c);
  }
}

void write_table(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    out << (i ? "," : "") << t.columns[i];
  }
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) {
        out << ',';
      }
      write_cell(out, row[i]);
    }
    out << '\n';
  }
}

nlohmann::json cell_json(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) {
      return format_number(*d);
    }
    return *d;
  }
  return std::get<std::string>(c);
}

nlohmann::json table_json(const Table& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      obj[t.columns[i]] = cell_json(row[i]);
    }
    rows.push_back(std::move(obj));
  }
  return rows;
}

}  // namespace

void write_csv(std::ostream& out, const Report& report) {
  out << "# realclock-qm " << report.command << '\n';
  out << "# config: " << report.config.dump() << '\n';
  for (std::size_t k = 0; k < report.tables.size(); ++k) {
    if (k > 0) {
      // Two blank lines start a new gnuplot data block.
      out << "\n\n# " << report.tables[k].name << '\n';
    }
    write_table(out, report.tables[k]);
  }
}

void write_json(std::ostream& out, const Report& report) {
  nlohmann::json doc = nlohmann::json::object();
  doc["command"] = report.command;
  doc["config"] = report.config;
  for (std::size_t k = 0; k < report.tables.size(); ++k) {
    doc[k == 0 ? std::string("rows") : report.tables[k].name] = table_json(report.tables[k]);
  }
  out << doc.dump(2) << '\n';
}

void write_report(std::ostream& out, const Report& report, Format format) {
  if (format == Format::csv) {
    write_csv(out, report);
  } else {
    write_json(out, report);
  }
}

}  // namespace realclock::cli
