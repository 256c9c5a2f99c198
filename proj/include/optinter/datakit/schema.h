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

#ifndef OPTINTER_DATAKIT_SCHEMA_H_
#define OPTINTER_DATAKIT_SCHEMA_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace optinter::datakit {

enum class FieldKind { kUnivalent, kMultivalent, kContinuous };

std::string_view to_string(FieldKind kind);
FieldKind parse_field_kind(std::string_view text);

struct FieldSpec {
  std::string name;
  FieldKind kind = FieldKind::kUnivalent;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

// Ordered list of input fields. The order defines field indices everywhere
// downstream, including the canonical pair order.
struct FeatureSchema {
  std::vector<FieldSpec> fields;

  size_t num_fields() const { return fields.size(); }
  size_t num_pairs() const;

  // Throws ConfigError unless names are unique and there are >= 2 fields.
  void validate() const;

  nlohmann::json to_json() const;
  static FeatureSchema from_json(const nlohmann::json& j);
  static FeatureSchema load(const std::string& path);
  void save(const std::string& path) const;

  // Content hash of names and kinds, hex encoded.
  std::string hash() const;

  friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;
};

// Number of unordered field pairs M(M-1)/2. Throws DomainError for M < 2.
size_t count_pairs(size_t num_fields);

struct FieldPair {
  uint32_t first = 0;
  uint32_t second = 0;

  friend bool operator==(const FieldPair&, const FieldPair&) = default;
};

// Pairs in canonical order (0,1), (0,2), ..., (M-2,M-1).
std::vector<FieldPair> enumerate_pairs(size_t num_fields);

// Position of pair (i, j), i < j, in the canonical order.
size_t pair_position(size_t i, size_t j, size_t num_fields);

}  // namespace optinter::datakit

#endif  // OPTINTER_DATAKIT_SCHEMA_H_
