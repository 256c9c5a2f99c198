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

#include "optinter/datakit/schema.h"

#include <fstream>
#include <set>

#include "optinter/errors.h"
#include "optinter/hash.h"

namespace optinter::datakit {

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::kUnivalent:
      return "categorical";
    case FieldKind::kMultivalent:
      return "multivalent";
    case FieldKind::kContinuous:
      return "continuous";
  }
  return "categorical";
}

FieldKind parse_field_kind(std::string_view text) {
  if (text == "categorical" || text == "categorical-univalent" ||
      text == "univalent") {
    return FieldKind::kUnivalent;
  }
  if (text == "multivalent" || text == "categorical-multivalent") {
    return FieldKind::kMultivalent;
  }
  if (text == "continuous") return FieldKind::kContinuous;
  throw ConfigError("unknown field kind '" + std::string(text) + "'");
}

size_t FeatureSchema::num_pairs() const { return count_pairs(num_fields()); }

void FeatureSchema::validate() const {
  if (fields.size() < 2) {
    throw ConfigError("schema needs at least 2 fields, got " +
                      std::to_string(fields.size()));
  }
  std::set<std::string> seen;
  for (const auto& f : fields) {
    if (f.name.empty()) throw ConfigError("schema: empty field name");
    if (f.name == "label") throw ConfigError("schema: 'label' is reserved");
    if (!seen.insert(f.name).second) {
      throw ConfigError("schema: duplicate field name '" + f.name + "'");
    }
  }
}

nlohmann::json FeatureSchema::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : fields) {
    arr.push_back({{"name", f.name}, {"kind", std::string(to_string(f.kind))}});
  }
  return {{"version", 1}, {"fields", arr}};
}

FeatureSchema FeatureSchema::from_json(const nlohmann::json& j) {
  FeatureSchema schema;
  try {
    for (const auto& f : j.at("fields")) {
      schema.fields.push_back(
          {f.at("name").get<std::string>(),
           parse_field_kind(f.value("kind", std::string("categorical")))});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("schema: ") + e.what());
  }
  schema.validate();
  return schema;
}

FeatureSchema FeatureSchema::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open schema file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("schema file " + path + ": " + e.what());
  }
  return from_json(j);
}

void FeatureSchema::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write schema file " + path);
  out << to_json().dump(2) << "\n";
}

std::string FeatureSchema::hash() const {
  Fnv1a64 h;
  for (const auto& f : fields) {
    h.update(f.name);
    h.update(":");
    h.update(to_string(f.kind));
    h.update(";");
  }
  return h.hex();
}

size_t count_pairs(size_t num_fields) {
  if (num_fields < 2) {
    throw DomainError("count_pairs: need at least 2 fields, got " +
                      std::to_string(num_fields));
  }
  return num_fields * (num_fields - 1) / 2;
}

std::vector<FieldPair> enumerate_pairs(size_t num_fields) {
  std::vector<FieldPair> pairs;
  if (num_fields < 2) return pairs;
  pairs.reserve(count_pairs(num_fields));
  for (uint32_t i = 0; i < num_fields; ++i) {
    for (uint32_t j = i + 1; j < num_fields; ++j) pairs.push_back({i, j});
  }
  return pairs;
}

size_t pair_position(size_t i, size_t j, size_t num_fields) {
  if (i > j) std::swap(i, j);
  if (i == j || j >= num_fields) {
    throw DomainError("pair_position: invalid pair (" + std::to_string(i) +
                      "," + std::to_string(j) + ")");
  }
  // Pairs before row i: sum_{r<i} (M-1-r).
  return i * (2 * num_fields - i - 1) / 2 + (j - i - 1);
}

}  // namespace optinter::datakit
