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

#ifndef OPTINTER_DATAKIT_VOCABULARY_H_
#define OPTINTER_DATAKIT_VOCABULARY_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "optinter/datakit/csv.h"
#include "optinter/datakit/schema.h"

namespace optinter::datakit {

struct VocabularyOptions {
  // Values seen fewer times than this in the training split map to OOV.
  uint32_t min_frequency = 1;
  // Equal-width buckets used when a continuous field enters a cross product.
  uint32_t continuous_buckets = 10;
  // 0 keeps an exact dictionary of cross-product values; otherwise pair
  // values are hashed into this many buckets (plus the OOV row).
  uint32_t cross_hash_buckets = 0;

  friend bool operator==(const VocabularyOptions&,
                         const VocabularyOptions&) = default;
};

// Value-to-index maps for original fields and for the cross-product feature
// of every field pair. Index 0 is the OOV row everywhere; indices are dense.
// Continuous fields own a single row (index 0) that is scaled by the
// min-max normalized value.
class Vocabulary {
 public:
  static constexpr uint32_t kOovIndex = 0;
  static constexpr int kFormatVersion = 1;

  Vocabulary() = default;

  static Vocabulary build(const RawTable& train, const FeatureSchema& schema,
                          const VocabularyOptions& options);

  const FeatureSchema& schema() const { return schema_; }
  const VocabularyOptions& options() const { return options_; }
  size_t num_fields() const { return schema_.num_fields(); }
  size_t num_pairs() const { return pairs_.size(); }
  const std::vector<FieldPair>& pairs() const { return pairs_; }

  uint32_t field_size(size_t field) const { return fields_.at(field).size; }
  uint32_t pair_size(size_t pair) const { return pair_vocab_.at(pair).size; }
  std::vector<uint32_t> field_sizes() const;
  std::vector<uint32_t> pair_sizes() const;

  // Index of a single categorical value; unseen or rare values give OOV.
  uint32_t lookup_value(size_t field, const std::string& value) const;
  // Index of a cross-product key (see cross_key); unseen keys give OOV.
  uint32_t lookup_cross(size_t pair, const std::string& key) const;

  // The categorical token a raw cell contributes to cross products:
  // the value itself, the sorted de-duplicated value set for multivalent
  // fields, or the equal-width bucket for continuous fields.
  std::string cross_token(size_t field, const std::string& raw) const;
  static std::string cross_key(std::string_view first,
                               std::string_view second);

  // Min-max normalization with train-split bounds, clamped to [0, 1].
  // Missing (empty) cells normalize to 0.
  double normalize(size_t field, const std::string& raw) const;

  double continuous_min(size_t field) const { return fields_.at(field).min; }
  double continuous_max(size_t field) const { return fields_.at(field).max; }

  void save(std::ostream& out) const;
  void save(const std::string& path) const;
  static Vocabulary load(std::istream& in);
  static Vocabulary load(const std::string& path);

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

 private:
  struct FieldVocab {
    std::unordered_map<std::string, uint32_t> index;
    uint32_t size = 1;
    double min = 0.0;
    double max = 0.0;

    friend bool operator==(const FieldVocab&, const FieldVocab&) = default;
  };
  struct PairVocab {
    std::unordered_map<std::string, uint32_t> index;
    uint32_t size = 1;

    friend bool operator==(const PairVocab&, const PairVocab&) = default;
  };

  void init_layout(const FeatureSchema& schema,
                   const VocabularyOptions& options);

  FeatureSchema schema_;
  VocabularyOptions options_;
  std::vector<FieldPair> pairs_;
  std::vector<FieldVocab> fields_;
  std::vector<PairVocab> pair_vocab_;
};

// Splits a multivalent cell on '|', dropping empty parts.
std::vector<std::string> split_multivalue(const std::string& cell);

// Parses a continuous cell; empty cells give nullopt. Throws FormatError on
// text that is not a finite number.
std::optional<double> parse_continuous(const std::string& cell);

}  // namespace optinter::datakit

#endif  // OPTINTER_DATAKIT_VOCABULARY_H_
