/* Copyright 2026 The OptInter Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "optinter/datakit/csv.h"

#include <fstream>
#include <istream>
#include <ostream>

#include "optinter/errors.h"

namespace optinter::datakit {

std::vector<std::string> split_csv_line(const std::string& line,
                                        size_t line_number) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  if (quoted) {
    throw FormatError("line " + std::to_string(line_number) +
                      ": unterminated quoted cell");
  }
  cells.push_back(std::move(cell));
  return cells;
}

RawTable parse_csv(std::istream& in, const std::string& source) {
  RawTable table;
  std::string line;
  size_t line_number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      auto cells = split_csv_line(line, line_number);
      if (cells.empty() || cells[0] != "label") {
        throw FormatError(source + ": line 1: header must start with 'label'");
      }
      table.header.assign(cells.begin() + 1, cells.end());
      have_header = true;
      continue;
    }
    if (line.empty()) continue;
    auto cells = split_csv_line(line, line_number);
    if (cells.size() != table.header.size() + 1) {
      throw FormatError(source + ": line " + std::to_string(line_number) +
                        ": expected " +
                        std::to_string(table.header.size() + 1) +
                        " columns, got " + std::to_string(cells.size()));
    }
    RawRow row;
    if (cells[0] == "0") {
      row.label = 0;
    } else if (cells[0] == "1") {
      row.label = 1;
    } else {
      throw FormatError(source + ": line " + std::to_string(line_number) +
                        ": label must be 0 or 1, got '" + cells[0] + "'");
    }
    row.values.assign(std::make_move_iterator(cells.begin() + 1),
                      std::make_move_iterator(cells.end()));
    row.line = line_number;
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw EmptyInputError(source + ": empty CSV input");
  return table;
}

RawTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open " + path);
  return parse_csv(in, path);
}

namespace {

void write_cell(std::ostream& out, const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) {
    out << cell;
    return;
  }
  out << '"';
  for (char c : cell) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

void write_csv(std::ostream& out, const RawTable& table) {
  out << "label";
  for (const auto& h : table.header) {
    out << ',';
    write_cell(out, h);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    out << static_cast<int>(row.label);
    for (const auto& v : row.values) {
      out << ',';
      write_cell(out, v);
    }
    out << '\n';
  }
}

void write_csv(const std::string& path, const RawTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write " + path);
  write_csv(out, table);
  if (!out) throw FileError("write failed for " + path);
}

void check_header(const RawTable& table, const FeatureSchema& schema) {
  if (table.header.size() != schema.num_fields()) {
    throw FormatError("CSV has " + std::to_string(table.header.size()) +
                      " feature columns but the schema declares " +
                      std::to_string(schema.num_fields()));
  }
  for (size_t i = 0; i < table.header.size(); ++i) {
    if (table.header[i] != schema.fields[i].name) {
      throw FormatError("CSV column " + std::to_string(i + 1) + " is '" +
                        table.header[i] + "' but the schema expects '" +
                        schema.fields[i].name + "'");
    }
  }
}

}  // namespace optinter::datakit
