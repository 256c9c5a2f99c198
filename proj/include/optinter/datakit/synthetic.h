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

#ifndef OPTINTER_DATAKIT_SYNTHETIC_H_
#define OPTINTER_DATAKIT_SYNTHETIC_H_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "optinter/datakit/dataset.h"

namespace optinter::datakit {

// How a planted field pair contributes to the label logit.
//   kMemorize:  arbitrary i.i.d. lookup table over the value pair (full rank)
//   kFactorize: inner product of per-value latent vectors (rank latent_dim)
//   kNoise:     no contribution
enum class PairKind { kMemorize, kFactorize, kNoise };

std::string_view to_string(PairKind kind);
PairKind parse_pair_kind(std::string_view text);

struct PlantedPair {
  uint32_t first = 0;
  uint32_t second = 0;
  PairKind kind = PairKind::kNoise;
  double strength = 1.0;  // standard deviation of the pair's logit term
};

struct SyntheticSpec {
  uint32_t num_fields = 4;
  std::vector<uint32_t> cardinalities;  // one per field
  std::vector<PlantedPair> pairs;       // unlisted pairs are noise
  double main_effect_scale = 0.3;       // std of per-value field effects
  double noise_level = 0.0;             // std of per-row logit noise
  double bias = 0.0;
  uint32_t latent_dim = 2;
  size_t train_rows = 1000;
  size_t validation_rows = 200;
  size_t test_rows = 200;
  uint64_t seed = 0;
  uint32_t min_frequency = 1;

  // Throws ConfigError/DomainError on inconsistent specs (cardinality 0,
  // out-of-range or duplicate pairs, fewer than 2 fields).
  void validate() const;
  // Ground-truth kind of every pair in canonical order.
  std::vector<PairKind> pair_kinds() const;

  nlohmann::json to_json() const;
  static SyntheticSpec from_json(const nlohmann::json& j);
  static SyntheticSpec load(const std::string& path);
};

struct SyntheticTables {
  FeatureSchema schema;
  RawSplits splits;
  std::vector<PairKind> ground_truth;  // canonical pair order
};

// Draws effect tables, then rows, with labels ~ Bernoulli(sigmoid(bias +
// main effects + pair terms + noise)). Same spec and seed give identical rows.
SyntheticTables generate_synthetic_tables(const SyntheticSpec& spec,
                                          uint64_t seed);

struct SyntheticDatasets {
  std::shared_ptr<const Vocabulary> vocabulary;
  Dataset train;
  Dataset validation;
  Dataset test;
  std::vector<PairKind> ground_truth;
};

// Generates tables and encodes them with a vocabulary built on the train
// split using spec.min_frequency.
SyntheticDatasets generate_synthetic(const SyntheticSpec& spec, uint64_t seed);

}  // namespace optinter::datakit

#endif  // OPTINTER_DATAKIT_SYNTHETIC_H_
