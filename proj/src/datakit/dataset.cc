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

#include "optinter/datakit/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "optinter/errors.h"
#include "optinter/numcore/rng.h"

namespace optinter::datakit {

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kValidation:
      return "validation";
    case Split::kTest:
      return "test";
  }
  return "train";
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::kTrain;
  if (text == "validation") return Split::kValidation;
  if (text == "test") return Split::kTest;
  throw ConfigError("unknown split '" + std::string(text) + "'");
}

Dataset::Dataset(std::shared_ptr<const Vocabulary> vocabulary, Split split,
                 std::vector<EncodedInstance> instances)
    : vocabulary_(std::move(vocabulary)),
      split_(split),
      instances_(std::move(instances)) {
  if (!vocabulary_) throw ConfigError("Dataset: null vocabulary");
}

std::vector<double> Dataset::labels() const {
  std::vector<double> out;
  out.reserve(instances_.size());
  for (const auto& inst : instances_) out.push_back(inst.label);
  return out;
}

Dataset Dataset::subset(const std::vector<size_t>& rows, Split split) const {
  std::vector<EncodedInstance> picked;
  picked.reserve(rows.size());
  for (size_t r : rows) picked.push_back(instances_.at(r));
  return Dataset(vocabulary_, split, std::move(picked));
}

EncodedInstance encode_instance(const RawRow& row,
                                const Vocabulary& vocabulary) {
  const FeatureSchema& schema = vocabulary.schema();
  const size_t m = schema.num_fields();
  if (row.values.size() != m) {
    throw FormatError("row at line " + std::to_string(row.line) + " has " +
                      std::to_string(row.values.size()) +
                      " fields, expected " + std::to_string(m));
  }
  EncodedInstance inst;
  inst.label = row.label;
  inst.original.resize(m);
  std::vector<std::string> tokens(m);
  try {
    for (size_t f = 0; f < m; ++f) {
      const std::string& cell = row.values[f];
      FieldValue& fv = inst.original[f];
      switch (schema.fields[f].kind) {
        case FieldKind::kUnivalent:
          fv.indices.push_back(vocabulary.lookup_value(f, cell));
          break;
        case FieldKind::kMultivalent: {
          auto values = split_multivalue(cell);
          std::sort(values.begin(), values.end());
          values.erase(std::unique(values.begin(), values.end()),
                       values.end());
          for (const auto& v : values) {
            fv.indices.push_back(vocabulary.lookup_value(f, v));
          }
          if (fv.indices.empty()) fv.indices.push_back(Vocabulary::kOovIndex);
          break;
        }
        case FieldKind::kContinuous:
          fv.indices.push_back(0);
          fv.scalar = vocabulary.normalize(f, cell);
          break;
      }
      tokens[f] = vocabulary.cross_token(f, cell);
    }
  } catch (const FormatError& e) {
    throw FormatError("row at line " + std::to_string(row.line) + ": " +
                      e.what());
  }
  const auto& pairs = vocabulary.pairs();
  inst.cross.resize(pairs.size());
  for (size_t p = 0; p < pairs.size(); ++p) {
    inst.cross[p] = vocabulary.lookup_cross(
        p, Vocabulary::cross_key(tokens[pairs[p].first],
                                 tokens[pairs[p].second]));
  }
  return inst;
}

Dataset encode_table(const RawTable& table,
                     std::shared_ptr<const Vocabulary> vocabulary,
                     Split split) {
  check_header(table, vocabulary->schema());
  std::vector<EncodedInstance> instances;
  instances.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    instances.push_back(encode_instance(row, *vocabulary));
  }
  return Dataset(std::move(vocabulary), split, std::move(instances));
}

std::array<std::vector<size_t>, 3> split_indices(
    size_t n, const std::array<double, 3>& fractions, uint64_t seed) {
  double total = 0.0;
  for (double f : fractions) {
    if (!(f >= 0.0)) throw DomainError("split: negative fraction");
    total += f;
  }
  if (!(fractions[0] > 0.0)) {
    throw DomainError("split: training fraction must be positive");
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw DomainError("split: fractions must sum to 1");
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  numcore::Rng rng(seed);
  for (size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[rng.uniform_int(i)]);
  }
  const auto nd = static_cast<double>(n);
  size_t n_train = std::min(n, static_cast<size_t>(std::llround(nd * fractions[0])));
  size_t n_val = std::min(n - n_train,
                          static_cast<size_t>(std::llround(nd * fractions[1])));
  std::array<std::vector<size_t>, 3> parts;
  parts[0].assign(order.begin(), order.begin() + n_train);
  parts[1].assign(order.begin() + n_train, order.begin() + n_train + n_val);
  parts[2].assign(order.begin() + n_train + n_val, order.end());
  return parts;
}

DatasetSplits split_dataset(const Dataset& dataset,
                            const std::array<double, 3>& fractions,
                            uint64_t seed) {
  auto parts = split_indices(dataset.size(), fractions, seed);
  return {dataset.subset(parts[0], Split::kTrain),
          dataset.subset(parts[1], Split::kValidation),
          dataset.subset(parts[2], Split::kTest)};
}

RawSplits split_table(const RawTable& table,
                      const std::array<double, 3>& fractions, uint64_t seed) {
  auto parts = split_indices(table.rows.size(), fractions, seed);
  RawSplits out;
  RawTable* targets[3] = {&out.train, &out.validation, &out.test};
  for (size_t s = 0; s < 3; ++s) {
    targets[s]->header = table.header;
    for (size_t r : parts[s]) targets[s]->rows.push_back(table.rows[r]);
  }
  return out;
}

namespace {

constexpr std::string_view kEncodedMagic = "optinter-encoded";
constexpr int kEncodedVersion = 1;

uint32_t parse_index(std::string_view s, size_t line) {
  uint32_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError("encoded line " + std::to_string(line) +
                      ": bad index '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split_view(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    size_t end = s.find(sep, start);
    if (end == std::string_view::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

}  // namespace

void write_encoded(std::ostream& out, const Dataset& dataset) {
  const FeatureSchema& schema = dataset.schema();
  out << kEncodedMagic << '\t' << kEncodedVersion << '\t'
      << to_string(dataset.split()) << '\t' << schema.hash() << '\t'
      << dataset.size() << '\n';
  char buf[64];
  for (const auto& inst : dataset.instances()) {
    out << static_cast<int>(inst.label);
    for (size_t f = 0; f < inst.original.size(); ++f) {
      const FieldValue& fv = inst.original[f];
      out << '\t';
      for (size_t k = 0; k < fv.indices.size(); ++k) {
        if (k > 0) out << '|';
        out << fv.indices[k];
      }
      if (schema.fields[f].kind == FieldKind::kContinuous) {
        auto res = std::to_chars(buf, buf + sizeof(buf), fv.scalar);
        out << ':' << std::string_view(buf, res.ptr - buf);
      }
    }
    for (uint32_t c : inst.cross) out << '\t' << c;
    out << '\n';
  }
}

void write_encoded(const std::string& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write " + path);
  write_encoded(out, dataset);
  if (!out) throw FileError("write failed for " + path);
}

Dataset read_encoded(std::istream& in,
                     std::shared_ptr<const Vocabulary> vocabulary) {
  const FeatureSchema& schema = vocabulary->schema();
  std::string line;
  if (!std::getline(in, line)) throw EmptyInputError("encoded split: empty");
  auto header = split_view(line, '\t');
  if (header.size() != 5 || header[0] != kEncodedMagic) {
    throw FormatError("encoded split: bad header");
  }
  if (parse_index(header[1], 1) != kEncodedVersion) {
    throw CompatibilityError("encoded split: unsupported version");
  }
  const Split split = parse_split(header[2]);
  if (header[3] != schema.hash()) {
    throw CompatibilityError("encoded split: schema hash mismatch");
  }
  const size_t expected_rows = parse_index(header[4], 1);
  const size_t m = schema.num_fields();
  const size_t p = vocabulary->num_pairs();
  std::vector<EncodedInstance> instances;
  instances.reserve(expected_rows);
  size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    auto cells = split_view(line, '\t');
    if (cells.size() != 1 + m + p) {
      throw FormatError("encoded line " + std::to_string(line_number) +
                        ": expected " + std::to_string(1 + m + p) +
                        " cells, got " + std::to_string(cells.size()));
    }
    EncodedInstance inst;
    if (cells[0] != "0" && cells[0] != "1") {
      throw FormatError("encoded line " + std::to_string(line_number) +
                        ": bad label");
    }
    inst.label = cells[0] == "1" ? 1 : 0;
    inst.original.resize(m);
    for (size_t f = 0; f < m; ++f) {
      std::string_view cell = cells[1 + f];
      FieldValue& fv = inst.original[f];
      if (schema.fields[f].kind == FieldKind::kContinuous) {
        const size_t colon = cell.find(':');
        if (colon == std::string_view::npos) {
          throw FormatError("encoded line " + std::to_string(line_number) +
                            ": continuous cell without value");
        }
        std::string_view num = cell.substr(colon + 1);
        auto res = std::from_chars(num.data(), num.data() + num.size(),
                                   fv.scalar);
        if (res.ec != std::errc() || res.ptr != num.data() + num.size()) {
          throw FormatError("encoded line " + std::to_string(line_number) +
                            ": bad continuous value");
        }
        cell = cell.substr(0, colon);
      }
      for (auto part : split_view(cell, '|')) {
        const uint32_t idx = parse_index(part, line_number);
        if (idx >= vocabulary->field_size(f)) {
          throw FormatError("encoded line " + std::to_string(line_number) +
                            ": index out of vocabulary");
        }
        fv.indices.push_back(idx);
      }
    }
    inst.cross.resize(p);
    for (size_t k = 0; k < p; ++k) {
      const uint32_t idx = parse_index(cells[1 + m + k], line_number);
      if (idx >= vocabulary->pair_size(k)) {
        throw FormatError("encoded line " + std::to_string(line_number) +
                          ": cross index out of vocabulary");
      }
      inst.cross[k] = idx;
    }
    instances.push_back(std::move(inst));
  }
  if (instances.size() != expected_rows) {
    throw FormatError("encoded split: header declares " +
                      std::to_string(expected_rows) + " rows, found " +
                      std::to_string(instances.size()));
  }
  return Dataset(std::move(vocabulary), split, std::move(instances));
}

Dataset read_encoded(const std::string& path,
                     std::shared_ptr<const Vocabulary> vocabulary) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path);
  return read_encoded(in, std::move(vocabulary));
}

}  // namespace optinter::datakit
