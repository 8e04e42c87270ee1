#include "fewfermi/table.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fewfermi::table {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("Table: row width mismatch");
  }
  rows.push_back(std::move(row));
}

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c > 0) out += ',';
    out += t.columns[c];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += ',';
      switch (row[c].kind) {
        case Cell::Kind::number:
          out += format_number(row[c].number);
          break;
        case Cell::Kind::text:
          out += row[c].text;
          break;
        case Cell::Kind::empty:
          break;
      }
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& t) {
  nlohmann::json j;
  j["columns"] = t.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& cell : row) {
      switch (cell.kind) {
        case Cell::Kind::number:
          if (std::isnan(cell.number)) {
            r.push_back(nullptr);
          } else {
            r.push_back(cell.number);
          }
          break;
        case Cell::Kind::text:
          r.push_back(cell.text);
          break;
        case Cell::Kind::empty:
          r.push_back(nullptr);
          break;
      }
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

Table from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  Table t;
  t.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& row : j.at("rows")) {
    std::vector<Cell> cells;
    for (const auto& cell : row) {
      if (cell.is_null()) {
        cells.push_back(Cell::none());
      } else if (cell.is_string()) {
        cells.push_back(Cell::str(cell.get<std::string>()));
      } else {
        cells.push_back(Cell::num(cell.get<double>()));
      }
    }
    t.add_row(std::move(cells));
  }
  return t;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace fewfermi::table
