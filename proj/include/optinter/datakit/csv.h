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

#ifndef OPTINTER_DATAKIT_CSV_H_
#define OPTINTER_DATAKIT_CSV_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "optinter/datakit/schema.h"

namespace optinter::datakit {

// One raw input row: binary label plus one text cell per field.
struct RawRow {
  uint8_t label = 0;
  std::vector<std::string> values;
  size_t line = 0;  // 1-based source line, 0 when synthesized

  friend bool operator==(const RawRow& a, const RawRow& b) {
    return a.label == b.label && a.values == b.values;
  }
};

// Rows of a `label,f1,...,fM` CSV file.
struct RawTable {
  std::vector<std::string> header;  // field names, without "label"
  std::vector<RawRow> rows;
};

// Separator for multivalent cells.
inline constexpr char kMultiValueSeparator = '|';

std::vector<std::string> split_csv_line(const std::string& line,
                                        size_t line_number);

// Parses CSV text. Throws FormatError (with line number) on malformed rows and
// EmptyInputError when there is no header.
RawTable parse_csv(std::istream& in, const std::string& source);
RawTable read_csv(const std::string& path);

void write_csv(std::ostream& out, const RawTable& table);
void write_csv(const std::string& path, const RawTable& table);

// Checks that the header names match the schema field names in order.
void check_header(const RawTable& table, const FeatureSchema& schema);

}  // namespace optinter::datakit

#endif  // OPTINTER_DATAKIT_CSV_H_
