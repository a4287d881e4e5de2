#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "netdens/errors.hpp"

namespace netdens {

// %.12g keeps CSV bodies compact and byte-stable across runs.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf);
}

struct CsvTable {
  std::vector<std::string> comments;  // leading '#' metadata lines, kept verbatim
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  double number_at(std::size_t row, const std::string& column) const {
    for (std::size_t c = 0; c < header.size(); ++c)
      if (header[c] == column) return std::stod(rows.at(row).at(c));
    throw ParseError("csv column not found: " + column);
  }
};

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw ParseError(path, 0, "cannot open file for writing");
  }

  void comment(const std::string& text) { out_ << "# " << text << "\n"; }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ",";
      out_ << cells[i];
    }
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open csv file");
  CsvTable table;
  std::string line;
  bool have_header = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      table.comments.push_back(line);
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
    } else {
      if (cells.size() != table.header.size())
        throw ParseError(path, line_no, "row width does not match header");
      table.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) throw ParseError(path, line_no, "csv file has no header row");
  return table;
}

}  // namespace netdens
