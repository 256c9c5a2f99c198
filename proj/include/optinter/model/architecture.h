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

#ifndef OPTINTER_MODEL_ARCHITECTURE_H_
#define OPTINTER_MODEL_ARCHITECTURE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "optinter/datakit/synthetic.h"

namespace optinter::model {

// Interaction modelling methods, in architecture-parameter column order.
enum class Method : uint8_t { kMemorize = 0, kFactorize = 1, kNaive = 2 };
inline constexpr size_t kNumMethods = 3;
inline constexpr std::array<Method, kNumMethods> kAllMethods = {
    Method::kMemorize, Method::kFactorize, Method::kNaive};

std::string_view to_string(Method method);
Method parse_method(std::string_view text);

// One method per field pair, canonical pair order.
class ArchitectureDecision {
 public:
  static constexpr int kFormatVersion = 1;

  ArchitectureDecision() = default;
  ArchitectureDecision(size_t num_fields, std::vector<Method> methods);

  static ArchitectureDecision uniform(size_t num_fields, Method method);
  static ArchitectureDecision from_ground_truth(
      size_t num_fields, const std::vector<datakit::PairKind>& kinds);

  size_t num_fields() const { return num_fields_; }
  size_t num_pairs() const { return methods_.size(); }
  Method operator[](size_t pair) const { return methods_[pair]; }
  const std::vector<Method>& methods() const { return methods_; }

  // Pair counts per method, ordered (memorize, factorize, naive).
  std::array<size_t, kNumMethods> counts() const;

  // {"version":1,"num_fields":M,"pairs":{"(1,2)":"memorize",...}} with
  // 1-based field numbers in the keys.
  nlohmann::ordered_json to_json() const;
  static ArchitectureDecision from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static ArchitectureDecision load(const std::string& path);

  friend bool operator==(const ArchitectureDecision&,
                         const ArchitectureDecision&) = default;

 private:
  size_t num_fields_ = 0;
  std::vector<Method> methods_;
};

// "(i,j)" with 1-based field numbers.
std::string pair_label(size_t first, size_t second);

}  // namespace optinter::model

#endif  // OPTINTER_MODEL_ARCHITECTURE_H_
