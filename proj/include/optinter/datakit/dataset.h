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

#ifndef OPTINTER_DATAKIT_DATASET_H_
#define OPTINTER_DATAKIT_DATASET_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "optinter/datakit/csv.h"
#include "optinter/datakit/vocabulary.h"

namespace optinter::datakit {

// Encoded payload of one original field.
//   univalent:   one index, scalar 1
//   multivalent: one index per distinct value (mean-pooled downstream)
//   continuous:  the field's single index, scalar = normalized value in [0,1]
struct FieldValue {
  std::vector<uint32_t> indices;
  double scalar = 1.0;

  friend bool operator==(const FieldValue&, const FieldValue&) = default;
};

struct EncodedInstance {
  uint8_t label = 0;
  std::vector<FieldValue> original;  // one per field
  std::vector<uint32_t> cross;       // one per pair, canonical order

  friend bool operator==(const EncodedInstance&,
                         const EncodedInstance&) = default;
};

enum class Split { kTrain, kValidation, kTest };
std::string_view to_string(Split split);
Split parse_split(std::string_view text);

// Immutable collection of encoded instances sharing one vocabulary.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::shared_ptr<const Vocabulary> vocabulary, Split split,
          std::vector<EncodedInstance> instances);

  const Vocabulary& vocabulary() const { return *vocabulary_; }
  const std::shared_ptr<const Vocabulary>& vocabulary_ptr() const {
    return vocabulary_;
  }
  const FeatureSchema& schema() const { return vocabulary_->schema(); }
  Split split() const { return split_; }

  size_t size() const { return instances_.size(); }
  bool empty() const { return instances_.empty(); }
  const EncodedInstance& operator[](size_t i) const { return instances_[i]; }
  const std::vector<EncodedInstance>& instances() const { return instances_; }

  std::vector<double> labels() const;
  Dataset subset(const std::vector<size_t>& rows, Split split) const;

 private:
  std::shared_ptr<const Vocabulary> vocabulary_;
  Split split_ = Split::kTrain;
  std::vector<EncodedInstance> instances_;
};

// Resolves a raw row against the vocabulary. Unseen values map to OOV.
// Throws FormatError naming the row's line on malformed cells.
EncodedInstance encode_instance(const RawRow& row,
                                const Vocabulary& vocabulary);

Dataset encode_table(const RawTable& table,
                     std::shared_ptr<const Vocabulary> vocabulary,
                     Split split);

// Seeded shuffle of 0..n-1 partitioned by (train, validation, test)
// fractions. Sizes are round(n*f_train), round(n*f_validation) and the
// remainder. Fractions must be non-negative, sum to 1, with f_train > 0.
std::array<std::vector<size_t>, 3> split_indices(
    size_t n, const std::array<double, 3>& fractions, uint64_t seed);

struct DatasetSplits {
  Dataset train;
  Dataset validation;
  Dataset test;
};

DatasetSplits split_dataset(const Dataset& dataset,
                            const std::array<double, 3>& fractions,
                            uint64_t seed);

struct RawSplits {
  RawTable train;
  RawTable validation;
  RawTable test;
};

RawSplits split_table(const RawTable& table,
                      const std::array<double, 3>& fractions, uint64_t seed);

// Encoded split persistence: a header line followed by one tab-separated
// record per instance (label, field cells, cross indices).
void write_encoded(std::ostream& out, const Dataset& dataset);
void write_encoded(const std::string& path, const Dataset& dataset);
Dataset read_encoded(std::istream& in,
                     std::shared_ptr<const Vocabulary> vocabulary);
Dataset read_encoded(const std::string& path,
                     std::shared_ptr<const Vocabulary> vocabulary);

}  // namespace optinter::datakit

#endif  // OPTINTER_DATAKIT_DATASET_H_
