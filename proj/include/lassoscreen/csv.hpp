#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lassoscreen {

/// Parse or format failure with a 1-based row/column diagnostic.
struct CsvError : std::runtime_error {
  std::size_t row = 0;
  std::size_t col = 0;
  CsvError(const std::string& msg, std::size_t row_ = 0, std::size_t col_ = 0)
      : std::runtime_error(msg), row(row_), col(col_) {}
};

/// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view cell, std::size_t row, std::size_t col,
                           const std::string& path) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw CsvError(path + ": row " + std::to_string(row) + ", column " +
                       std::to_string(col) + ": cannot parse '" +
                       std::string(cell) + "' as a number",
                   row, col);
  }
  return value;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  if (!cells.empty() && !cells.back().empty() && cells.back().back() == '\r') {
    cells.back().pop_back();
  }
  return cells;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Reads a header line plus an all-numeric body. Every row must have the
/// header's width.
inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError(path + ": cannot open file");

  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw CsvError(path + ": empty file");
  table.header = split_csv_line(line);

  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != table.header.size()) {
      throw CsvError(path + ": row " + std::to_string(row) + " has " +
                         std::to_string(cells.size()) + " cells, expected " +
                         std::to_string(table.header.size()),
                     row, 0);
    }
    std::vector<double> values(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      values[c] = parse_double(cells[c], row, c + 1, path);
    }
    table.rows.push_back(std::move(values));
  }
  return table;
}

}  // namespace lassoscreen
