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

#include "optinter/datakit/vocabulary.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "optinter/errors.h"
#include "optinter/hash.h"

namespace optinter::datakit {

namespace {

constexpr char kKeySeparator = '\x1f';
constexpr std::string_view kMagic = "optinter-vocabulary";

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case kKeySeparator: out += "\\s"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape(std::string_view s, size_t line) {
  std::string out;
  out.reserve(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out.push_back(s[i]);
      continue;
    }
    if (++i >= s.size()) {
      throw FormatError("vocabulary line " + std::to_string(line) +
                        ": dangling escape");
    }
    switch (s[i]) {
      case '\\': out.push_back('\\'); break;
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case 's': out.push_back(kKeySeparator); break;
      default:
        throw FormatError("vocabulary line " + std::to_string(line) +
                          ": bad escape");
    }
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, size_t line) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError("vocabulary line " + std::to_string(line) +
                      ": bad number '" + std::string(s) + "'");
  }
  return v;
}

uint64_t parse_uint(std::string_view s, size_t line) {
  uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError("vocabulary line " + std::to_string(line) +
                      ": bad integer '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(line);
  while (std::getline(in, part, '\t')) parts.push_back(part);
  if (!line.empty() && line.back() == '\t') parts.emplace_back();
  return parts;
}

// Dense indices 1..n for values at or above the threshold, in lexicographic
// order so the assignment does not depend on hash-map iteration.
std::unordered_map<std::string, uint32_t> assign_indices(
    const std::unordered_map<std::string, uint32_t>& counts,
    uint32_t min_frequency) {
  std::vector<std::string> kept;
  for (const auto& [value, count] : counts) {
    if (count >= min_frequency) kept.push_back(value);
  }
  std::sort(kept.begin(), kept.end());
  std::unordered_map<std::string, uint32_t> index;
  index.reserve(kept.size());
  for (size_t i = 0; i < kept.size(); ++i) {
    index.emplace(std::move(kept[i]), static_cast<uint32_t>(i + 1));
  }
  return index;
}

}  // namespace

std::vector<std::string> split_multivalue(const std::string& cell) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (start <= cell.size()) {
    size_t end = cell.find(kMultiValueSeparator, start);
    if (end == std::string::npos) end = cell.size();
    if (end > start) parts.emplace_back(cell.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

std::optional<double> parse_continuous(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  double v = 0.0;
  auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() ||
      !std::isfinite(v)) {
    throw FormatError("not a finite number: '" + cell + "'");
  }
  return v;
}

void Vocabulary::init_layout(const FeatureSchema& schema,
                             const VocabularyOptions& options) {
  schema.validate();
  if (options.min_frequency == 0) {
    throw ConfigError("vocabulary: min_frequency must be >= 1");
  }
  if (options.continuous_buckets == 0) {
    throw ConfigError("vocabulary: continuous_buckets must be >= 1");
  }
  schema_ = schema;
  options_ = options;
  pairs_ = enumerate_pairs(schema.num_fields());
  fields_.assign(schema.num_fields(), FieldVocab{});
  pair_vocab_.assign(pairs_.size(), PairVocab{});
}

Vocabulary Vocabulary::build(const RawTable& train, const FeatureSchema& schema,
                             const VocabularyOptions& options) {
  Vocabulary vocab;
  vocab.init_layout(schema, options);
  check_header(train, schema);
  if (train.rows.empty()) {
    throw EmptyInputError("build_vocabulary: no training rows");
  }
  const size_t m = schema.num_fields();

  std::vector<std::unordered_map<std::string, uint32_t>> counts(m);
  std::vector<bool> seen_range(m, false);
  for (const auto& row : train.rows) {
    if (row.values.size() != m) {
      throw FormatError("row at line " + std::to_string(row.line) +
                        " has " + std::to_string(row.values.size()) +
                        " fields, expected " + std::to_string(m));
    }
    for (size_t f = 0; f < m; ++f) {
      const std::string& cell = row.values[f];
      switch (schema.fields[f].kind) {
        case FieldKind::kUnivalent:
          ++counts[f][cell];
          break;
        case FieldKind::kMultivalent: {
          auto values = split_multivalue(cell);
          std::sort(values.begin(), values.end());
          values.erase(std::unique(values.begin(), values.end()),
                       values.end());
          for (auto& v : values) ++counts[f][v];
          break;
        }
        case FieldKind::kContinuous: {
          std::optional<double> x;
          try {
            x = parse_continuous(cell);
          } catch (const FormatError& e) {
            throw FormatError("line " + std::to_string(row.line) + ", field '" +
                              schema.fields[f].name + "': " + e.what());
          }
          if (!x) break;
          FieldVocab& fv = vocab.fields_[f];
          if (!seen_range[f]) {
            fv.min = fv.max = *x;
            seen_range[f] = true;
          } else {
            fv.min = std::min(fv.min, *x);
            fv.max = std::max(fv.max, *x);
          }
          break;
        }
      }
    }
  }
  for (size_t f = 0; f < m; ++f) {
    FieldVocab& fv = vocab.fields_[f];
    if (schema.fields[f].kind == FieldKind::kContinuous) {
      fv.size = 1;
      continue;
    }
    fv.index = assign_indices(counts[f], options.min_frequency);
    fv.size = static_cast<uint32_t>(fv.index.size() + 1);
  }

  if (options.cross_hash_buckets > 0) {
    for (auto& pv : vocab.pair_vocab_) pv.size = options.cross_hash_buckets + 1;
    return vocab;
  }
  std::vector<std::unordered_map<std::string, uint32_t>> pair_counts(
      vocab.pairs_.size());
  std::vector<std::string> tokens(m);
  for (const auto& row : train.rows) {
    for (size_t f = 0; f < m; ++f) {
      tokens[f] = vocab.cross_token(f, row.values[f]);
    }
    for (size_t p = 0; p < vocab.pairs_.size(); ++p) {
      const auto [i, j] = vocab.pairs_[p];
      ++pair_counts[p][cross_key(tokens[i], tokens[j])];
    }
  }
  for (size_t p = 0; p < vocab.pairs_.size(); ++p) {
    PairVocab& pv = vocab.pair_vocab_[p];
    pv.index = assign_indices(pair_counts[p], options.min_frequency);
    pv.size = static_cast<uint32_t>(pv.index.size() + 1);
  }
  return vocab;
}

std::vector<uint32_t> Vocabulary::field_sizes() const {
  std::vector<uint32_t> sizes;
  for (const auto& f : fields_) sizes.push_back(f.size);
  return sizes;
}

std::vector<uint32_t> Vocabulary::pair_sizes() const {
  std::vector<uint32_t> sizes;
  for (const auto& p : pair_vocab_) sizes.push_back(p.size);
  return sizes;
}

uint32_t Vocabulary::lookup_value(size_t field, const std::string& value) const {
  const auto& index = fields_.at(field).index;
  auto it = index.find(value);
  return it == index.end() ? kOovIndex : it->second;
}

uint32_t Vocabulary::lookup_cross(size_t pair, const std::string& key) const {
  const PairVocab& pv = pair_vocab_.at(pair);
  if (options_.cross_hash_buckets > 0) {
    return 1 + static_cast<uint32_t>(fnv1a64(key) %
                                     options_.cross_hash_buckets);
  }
  auto it = pv.index.find(key);
  return it == pv.index.end() ? kOovIndex : it->second;
}

std::string Vocabulary::cross_token(size_t field, const std::string& raw) const {
  switch (schema_.fields.at(field).kind) {
    case FieldKind::kUnivalent:
      return raw;
    case FieldKind::kMultivalent: {
      auto values = split_multivalue(raw);
      std::sort(values.begin(), values.end());
      values.erase(std::unique(values.begin(), values.end()), values.end());
      std::string token;
      for (size_t i = 0; i < values.size(); ++i) {
        if (i > 0) token.push_back(kMultiValueSeparator);
        token += values[i];
      }
      return token;
    }
    case FieldKind::kContinuous: {
      if (!parse_continuous(raw)) return "NA";
      const double x = normalize(field, raw);
      const uint32_t buckets = options_.continuous_buckets;
      auto b = static_cast<uint32_t>(std::floor(x * buckets));
      if (b >= buckets) b = buckets - 1;
      return "B" + std::to_string(b);
    }
  }
  return raw;
}

std::string Vocabulary::cross_key(std::string_view first,
                                  std::string_view second) {
  std::string key;
  key.reserve(first.size() + second.size() + 1);
  key.append(first);
  key.push_back(kKeySeparator);
  key.append(second);
  return key;
}

double Vocabulary::normalize(size_t field, const std::string& raw) const {
  const auto x = parse_continuous(raw);
  if (!x) return 0.0;
  const FieldVocab& fv = fields_.at(field);
  const double span = fv.max - fv.min;
  if (!(span > 0.0)) return 0.0;
  return std::clamp((*x - fv.min) / span, 0.0, 1.0);
}

void Vocabulary::save(std::ostream& out) const {
  out << kMagic << '\t' << kFormatVersion << '\n';
  out << "options\t" << options_.min_frequency << '\t'
      << options_.continuous_buckets << '\t' << options_.cross_hash_buckets
      << '\n';
  for (size_t f = 0; f < fields_.size(); ++f) {
    const FieldVocab& fv = fields_[f];
    out << "field\t" << escape(schema_.fields[f].name) << '\t'
        << to_string(schema_.fields[f].kind) << '\t' << fv.size << '\t'
        << format_double(fv.min) << '\t' << format_double(fv.max) << '\n';
  }
  for (size_t f = 0; f < fields_.size(); ++f) {
    std::map<uint32_t, const std::string*> ordered;
    for (const auto& [value, idx] : fields_[f].index) ordered[idx] = &value;
    for (const auto& [idx, value] : ordered) {
      out << "value\t" << escape(schema_.fields[f].name) << '\t'
          << escape(*value) << '\t' << idx << '\n';
    }
  }
  for (size_t p = 0; p < pairs_.size(); ++p) {
    const auto& names = schema_.fields;
    const std::string a = escape(names[pairs_[p].first].name);
    const std::string b = escape(names[pairs_[p].second].name);
    out << "pair\t" << a << '\t' << b << '\t' << pair_vocab_[p].size << '\n';
    std::map<uint32_t, const std::string*> ordered;
    for (const auto& [key, idx] : pair_vocab_[p].index) ordered[idx] = &key;
    for (const auto& [idx, key] : ordered) {
      out << "cross\t" << a << '\t' << b << '\t' << escape(*key) << '\t' << idx
          << '\n';
    }
  }
  out << "end\n";
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write vocabulary " + path);
  save(out);
  if (!out) throw FileError("write failed for " + path);
}

Vocabulary Vocabulary::load(std::istream& in) {
  std::string line;
  size_t line_number = 0;
  auto next = [&]() -> std::vector<std::string> {
    if (!std::getline(in, line)) {
      throw FormatError("vocabulary: unexpected end of file after line " +
                        std::to_string(line_number));
    }
    ++line_number;
    return split_tabs(line);
  };
  auto expect = [&](const std::vector<std::string>& parts, const char* tag,
                    size_t n) {
    if (parts.empty() || parts[0] != tag || parts.size() != n) {
      throw FormatError("vocabulary line " + std::to_string(line_number) +
                        ": expected '" + tag + "' record");
    }
  };

  auto header = next();
  if (header.size() != 2 || header[0] != kMagic) {
    throw FormatError("vocabulary: missing header");
  }
  if (parse_uint(header[1], line_number) != kFormatVersion) {
    throw CompatibilityError("vocabulary: unsupported version " + header[1]);
  }
  auto opts = next();
  expect(opts, "options", 4);
  VocabularyOptions options;
  options.min_frequency = static_cast<uint32_t>(parse_uint(opts[1], line_number));
  options.continuous_buckets =
      static_cast<uint32_t>(parse_uint(opts[2], line_number));
  options.cross_hash_buckets =
      static_cast<uint32_t>(parse_uint(opts[3], line_number));

  FeatureSchema schema;
  std::vector<FieldVocab> fields;
  std::vector<std::string> parts = next();
  while (!parts.empty() && parts[0] == "field") {
    expect(parts, "field", 6);
    schema.fields.push_back(
        {unescape(parts[1], line_number), parse_field_kind(parts[2])});
    FieldVocab fv;
    fv.size = static_cast<uint32_t>(parse_uint(parts[3], line_number));
    fv.min = parse_double(parts[4], line_number);
    fv.max = parse_double(parts[5], line_number);
    fields.push_back(std::move(fv));
    parts = next();
  }

  Vocabulary vocab;
  vocab.init_layout(schema, options);
  vocab.fields_ = std::move(fields);
  std::unordered_map<std::string, size_t> field_by_name;
  for (size_t f = 0; f < schema.fields.size(); ++f) {
    field_by_name[schema.fields[f].name] = f;
  }
  auto field_of = [&](const std::string& escaped) {
    auto it = field_by_name.find(unescape(escaped, line_number));
    if (it == field_by_name.end()) {
      throw FormatError("vocabulary line " + std::to_string(line_number) +
                        ": unknown field");
    }
    return it->second;
  };
  auto check_index = [&](uint64_t idx, uint32_t size) {
    if (idx == kOovIndex || idx >= size) {
      throw FormatError("vocabulary line " + std::to_string(line_number) +
                        ": index out of range");
    }
    return static_cast<uint32_t>(idx);
  };

  while (!parts.empty() && parts[0] == "value") {
    expect(parts, "value", 4);
    const size_t f = field_of(parts[1]);
    const uint32_t idx =
        check_index(parse_uint(parts[3], line_number), vocab.fields_[f].size);
    vocab.fields_[f].index.emplace(unescape(parts[2], line_number), idx);
    parts = next();
  }
  size_t p = 0;
  while (!parts.empty() && parts[0] == "pair") {
    expect(parts, "pair", 4);
    if (p >= vocab.pairs_.size() ||
        field_of(parts[1]) != vocab.pairs_[p].first ||
        field_of(parts[2]) != vocab.pairs_[p].second) {
      throw FormatError("vocabulary line " + std::to_string(line_number) +
                        ": pair out of canonical order");
    }
    vocab.pair_vocab_[p].size =
        static_cast<uint32_t>(parse_uint(parts[3], line_number));
    parts = next();
    while (!parts.empty() && parts[0] == "cross") {
      expect(parts, "cross", 5);
      const uint32_t idx = check_index(parse_uint(parts[4], line_number),
                                       vocab.pair_vocab_[p].size);
      vocab.pair_vocab_[p].index.emplace(unescape(parts[3], line_number), idx);
      parts = next();
    }
    ++p;
  }
  if (p != vocab.pairs_.size()) {
    throw FormatError("vocabulary: expected " +
                      std::to_string(vocab.pairs_.size()) + " pairs, found " +
                      std::to_string(p));
  }
  if (parts.size() != 1 || parts[0] != "end") {
    throw FormatError("vocabulary line " + std::to_string(line_number) +
                      ": expected 'end'");
  }
  return vocab;
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open vocabulary " + path);
  return load(in);
}

}  // namespace optinter::datakit
