#pragma once

#include <optional>
#include <string>
#include <vector>

// Tabular output shared by the CLI: spectrum rows and oracle-comparison
// reports, emitted as CSV (12 significant digits, LF endings) or JSON.
namespace fewfermi::table {

struct Cell {
  enum class Kind { number, text, empty } kind = Kind::empty;
  double number = 0.0;
  std::string text;

  static Cell num(double v) { return {Kind::number, v, {}}; }
  static Cell str(std::string v) { return {Kind::text, 0.0, std::move(v)}; }
  static Cell none() { return {}; }

  bool operator==(const Cell&) const = default;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  bool operator==(const Table&) const = default;
};

std::string to_csv(const Table& t);
std::string to_json(const Table& t);
Table from_json(const std::string& text);

void write_file(const std::string& path, const std::string& content);

}  // namespace fewfermi::table
