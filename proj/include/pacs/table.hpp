#pragma once

#include <cstdio>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace pacs {

// Self-describing numeric table: every emitted artifact echoes its full
// resolved configuration in the metadata block.
struct OutputTable {
  using Cell = std::variant<double, long, std::string>;

  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  void add_meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
  }
  void add_meta(std::string key, double value) {
    metadata.emplace_back(std::move(key), format_double(value));
  }
  void add_meta(std::string key, long value) {
    metadata.emplace_back(std::move(key), std::to_string(value));
  }

  // 17 significant digits: doubles round-trip exactly.
  static std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }

  static std::string format_cell(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
    if (const auto* i = std::get_if<long>(&cell)) return std::to_string(*i);
    return std::get<std::string>(cell);
  }

  std::string to_csv() const {
    std::string out;
    for (const auto& [key, value] : metadata) {
      out += "# " + key + "=" + value + "\n";
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out += ',';
      out += columns[i];
    }
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += format_cell(row[i]);
      }
      out += '\n';
    }
    return out;
  }

  std::string to_json() const {
    nlohmann::json j;
    for (const auto& [key, value] : metadata) j["metadata"][key] = value;
    j["columns"] = columns;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : rows) {
      nlohmann::json jrow = nlohmann::json::array();
      for (const auto& cell : row) {
        if (const auto* d = std::get_if<double>(&cell)) {
          jrow.push_back(*d);
        } else if (const auto* i = std::get_if<long>(&cell)) {
          jrow.push_back(*i);
        } else {
          jrow.push_back(std::get<std::string>(cell));
        }
      }
      j["rows"].push_back(std::move(jrow));
    }
    return j.dump(2) + "\n";
  }
};

}  // namespace pacs
