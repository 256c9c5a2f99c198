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

#include "optinter/model/architecture.h"

#include <fstream>

#include "optinter/errors.h"

namespace optinter::model {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kMemorize:
      return "memorize";
    case Method::kFactorize:
      return "factorize";
    case Method::kNaive:
      return "naive";
  }
  return "naive";
}

Method parse_method(std::string_view text) {
  if (text == "memorize") return Method::kMemorize;
  if (text == "factorize") return Method::kFactorize;
  if (text == "naive") return Method::kNaive;
  throw ConfigError("unknown interaction method '" + std::string(text) + "'");
}

ArchitectureDecision::ArchitectureDecision(size_t num_fields,
                                           std::vector<Method> methods)
    : num_fields_(num_fields), methods_(std::move(methods)) {
  const size_t expected = num_fields < 2 ? 0 : num_fields * (num_fields - 1) / 2;
  if (methods_.size() != expected) {
    throw ConfigError("decision: " + std::to_string(methods_.size()) +
                      " methods for " + std::to_string(num_fields) +
                      " fields (expected " + std::to_string(expected) + ")");
  }
}

ArchitectureDecision ArchitectureDecision::uniform(size_t num_fields,
                                                   Method method) {
  const size_t p = num_fields < 2 ? 0 : num_fields * (num_fields - 1) / 2;
  return ArchitectureDecision(num_fields, std::vector<Method>(p, method));
}

ArchitectureDecision ArchitectureDecision::from_ground_truth(
    size_t num_fields, const std::vector<datakit::PairKind>& kinds) {
  std::vector<Method> methods;
  methods.reserve(kinds.size());
  for (auto k : kinds) {
    switch (k) {
      case datakit::PairKind::kMemorize:
        methods.push_back(Method::kMemorize);
        break;
      case datakit::PairKind::kFactorize:
        methods.push_back(Method::kFactorize);
        break;
      case datakit::PairKind::kNoise:
        methods.push_back(Method::kNaive);
        break;
    }
  }
  return ArchitectureDecision(num_fields, std::move(methods));
}

std::array<size_t, kNumMethods> ArchitectureDecision::counts() const {
  std::array<size_t, kNumMethods> c{};
  for (Method m : methods_) ++c[static_cast<size_t>(m)];
  return c;
}

std::string pair_label(size_t first, size_t second) {
  return "(" + std::to_string(first + 1) + "," + std::to_string(second + 1) +
         ")";
}

nlohmann::ordered_json ArchitectureDecision::to_json() const {
  nlohmann::ordered_json pairs = nlohmann::ordered_json::object();
  size_t p = 0;
  for (size_t i = 0; i < num_fields_; ++i) {
    for (size_t j = i + 1; j < num_fields_; ++j) {
      pairs[pair_label(i, j)] = std::string(to_string(methods_[p++]));
    }
  }
  nlohmann::ordered_json j;
  j["version"] = kFormatVersion;
  j["num_fields"] = num_fields_;
  j["pairs"] = pairs;
  return j;
}

ArchitectureDecision ArchitectureDecision::from_json(const nlohmann::json& j) {
  try {
    if (j.value("version", 0) != kFormatVersion) {
      throw ConfigError("decision: unsupported version");
    }
    const size_t m = j.at("num_fields").get<size_t>();
    const auto& pairs = j.at("pairs");
    std::vector<Method> methods;
    for (size_t i = 0; i < m; ++i) {
      for (size_t k = i + 1; k < m; ++k) {
        const std::string key = pair_label(i, k);
        if (!pairs.contains(key)) {
          throw ConfigError("decision: missing pair " + key);
        }
        methods.push_back(parse_method(pairs.at(key).get<std::string>()));
      }
    }
    if (pairs.size() != methods.size()) {
      throw ConfigError("decision: unexpected extra pairs");
    }
    return ArchitectureDecision(m, std::move(methods));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("decision: ") + e.what());
  }
}

void ArchitectureDecision::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write decision file " + path);
  out << to_json().dump(2) << "\n";
}

ArchitectureDecision ArchitectureDecision::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open decision file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("decision file " + path + ": " + e.what());
  }
  return from_json(j);
}

}  // namespace optinter::model
