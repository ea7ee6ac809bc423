#pragma once

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "evbc/config.hpp"
#include "evbc/grid.hpp"

namespace evbc {

// Tabular interchange format: '#'-prefixed metadata lines, a header line,
// then one comma-separated numeric row per line.  Values round-trip exactly
// (shortest representation); infinities appear as "inf"/"-inf", NaN as "nan".
struct CsvTable {
  std::vector<std::string> metadata;  // without the leading "# "
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void append_row(std::vector<double> row) {
    if (row.size() != header.size())
      throw Error("CsvTable: row arity does not match header");
    rows.push_back(std::move(row));
  }

  // Index of a named column, or ColumnNotFound.
  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw ColumnNotFound(name);
  }

  std::string to_string() const {
    std::string out;
    for (const auto& m : metadata) {
      out += "# ";
      out += m;
      out += '\n';
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out += ',';
      out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += format_double(row[i]);
      }
      out += '\n';
    }
    return out;
  }

  static CsvTable parse(const std::string& text) {
    CsvTable table;
    bool have_header = false;
    std::size_t start = 0;
    while (start < text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      std::string line = text.substr(start, end - start);
      start = end + 1;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line[0] == '#') {
        std::size_t payload = 1;
        if (payload < line.size() && line[payload] == ' ') ++payload;
        table.metadata.push_back(line.substr(payload));
        continue;
      }
      const auto cells = detail::split(line, ',');
      if (!have_header) {
        table.header.assign(cells.begin(), cells.end());
        have_header = true;
        continue;
      }
      std::vector<double> row;
      row.reserve(cells.size());
      for (const auto& c : cells) row.push_back(parse_double(c, "csv cell"));
      table.append_row(std::move(row));
    }
    if (!have_header) throw Error("CsvTable::parse: no header line");
    return table;
  }
};

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return text;
}

inline CsvTable read_csv_file(const std::string& path) {
  return CsvTable::parse(read_text_file(path));
}

// Band dump of a tridiagonal matrix: columns (row, col, value), bands only,
// row-major order.
inline CsvTable band_table(const TriMatrix& T) {
  CsvTable t;
  t.header = {"row", "col", "value"};
  for (int i = 0; i < T.order(); ++i) {
    if (i > 0) t.append_row({double(i), double(i - 1), T.sub(i - 1)});
    t.append_row({double(i), double(i), T.diag(i)});
    if (i < T.order() - 1) t.append_row({double(i), double(i + 1), T.super(i)});
  }
  return t;
}

inline CsvTable band_table(const DiagMatrix& D) {
  CsvTable t;
  t.header = {"row", "col", "value"};
  for (int i = 0; i < D.order(); ++i)
    t.append_row({double(i), double(i), D.diag(i)});
  return t;
}

}  // namespace evbc
