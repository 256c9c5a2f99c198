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

#ifndef OPTINTER_MODEL_OPTINTER_MODEL_H_
#define OPTINTER_MODEL_OPTINTER_MODEL_H_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "optinter/datakit/dataset.h"
#include "optinter/model/architecture.h"
#include "optinter/model/combination.h"
#include "optinter/model/config.h"
#include "optinter/model/mlp.h"

namespace optinter::model {

using datakit::EncodedInstance;

// Vocabulary sizes the network is built against.
struct ModelDims {
  std::vector<uint32_t> field_sizes;
  std::vector<uint32_t> pair_sizes;

  static ModelDims from_vocabulary(const datakit::Vocabulary& vocabulary);
  size_t num_fields() const { return field_sizes.size(); }
  size_t num_pairs() const { return pair_sizes.size(); }

  nlohmann::json to_json() const;
  static ModelDims from_json(const nlohmann::json& j);

  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

// Embedding table with the set of rows touched since the last update.
struct EmbeddingTable {
  Parameter table;
  std::vector<uint32_t> touched;
  std::vector<uint8_t> touched_mark;

  EmbeddingTable() = default;
  EmbeddingTable(std::string name, Tensor2 value);

  size_t rows() const { return table.value.rows(); }
  size_t dim() const { return table.value.cols(); }
  void touch(uint32_t row) {
    if (!touched_mark[row]) {
      touched_mark[row] = 1;
      touched.push_back(row);
    }
  }
  void clear_touched();
};

struct ForwardOptions {
  double tau = 1.0;
  const Tensor2* gumbel = nullptr;        // [P x 3] noise, relaxed mode only
  const Tensor2* forced_probs = nullptr;  // [P x 3], bypasses alpha
};

struct ForwardCache {
  std::vector<const EncodedInstance*> batch;
  Tensor2 eo;
  Tensor2 em;
  Tensor2 probs;
  double tau = 1.0;
  bool forced = false;
  MlpCache mlp;
};

enum class UpdateScope { kAll, kWeightsOnly, kArchitectureOnly };

// Parameter totals split by component.
struct ParameterLedger {
  std::vector<std::pair<std::string, size_t>> entries;
  size_t original = 0;
  size_t cross = 0;
  size_t architecture = 0;
  size_t classifier = 0;

  size_t embeddings() const { return original + cross; }
  size_t total() const { return original + cross + architecture + classifier; }
};

// The network: original and cross-product embedding tables, the combination
// block and the classifier. Without a decision the model is in relaxed
// (search) mode and owns architecture parameters; with one it is a fixed
// architecture and only memorized pairs own cross-product tables.
class OptInterModel {
 public:
  OptInterModel(ModelConfig config, ModelDims dims,
                std::optional<ArchitectureDecision> decision = std::nullopt);

  bool relaxed() const { return !decision_.has_value(); }
  const std::optional<ArchitectureDecision>& decision() const {
    return decision_;
  }
  const ModelConfig& config() const { return config_; }
  const ModelDims& dims() const { return dims_; }
  const CombinationLayout& layout() const { return layout_; }
  size_t classifier_input_width() const { return mlp_.input_width(); }

  // e^o [B x M*s1]: row lookup, mean pooling for multivalent fields, value
  // scaling for continuous fields. Throws LookupError on bad indices.
  Tensor2 embed_original(std::span<const EncodedInstance* const> batch) const;
  // e^m [B x P*s2]; pairs without a table stay zero.
  Tensor2 embed_cross(std::span<const EncodedInstance* const> batch) const;

  // Logits [B x 1].
  Tensor2 forward(std::span<const EncodedInstance* const> batch,
                  const ForwardOptions& options,
                  ForwardCache* cache = nullptr) const;
  // Accumulates gradients for every parameter block from one forward pass.
  void backward(const ForwardCache& cache, const Tensor2& dlogits);

  // Click probabilities for a whole dataset, in order.
  std::vector<double> predict(const datakit::Dataset& data,
                              const ForwardOptions& options,
                              size_t batch_size = 2048) const;

  // Architecture parameters are stored as log(alpha), shape [P x 3].
  Parameter& arch_logits() { return arch_; }
  const Parameter& arch_logits() const { return arch_; }
  Tensor2 alpha() const;

  // All blocks in checkpoint order: E^o tables, allocated E^m tables, log
  // alpha (relaxed only), classifier.
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  // One Adam step over the selected parameter families; gradients of the
  // others are discarded.
  void apply_adam(UpdateScope scope);
  void zero_grad();

  size_t allocated_parameter_count() const;

  std::vector<EmbeddingTable>& original_tables() { return original_; }
  std::vector<EmbeddingTable>& cross_tables() { return cross_; }
  const std::vector<EmbeddingTable>& cross_tables() const { return cross_; }
  Mlp& mlp() { return mlp_; }

 private:
  bool has_cross_table(size_t pair) const;

  ModelConfig config_;
  ModelDims dims_;
  std::optional<ArchitectureDecision> decision_;
  CombinationLayout layout_;
  std::vector<EmbeddingTable> original_;
  std::vector<EmbeddingTable> cross_;  // one slot per pair; empty if unused
  Parameter arch_;
  Mlp mlp_;
};

// Parameters reachable in the given mode (nullopt = relaxed): original
// tables, cross tables of memorized pairs only in fixed mode, alpha only in
// relaxed mode, and the classifier sized for that mode's input width.
ParameterLedger count_parameters(
    const ModelConfig& config, const ModelDims& dims,
    const std::optional<ArchitectureDecision>& mode);
ParameterLedger count_parameters(
    const OptInterModel& model,
    const std::optional<ArchitectureDecision>& mode);
// Counts the model in its own mode.
ParameterLedger count_parameters(const OptInterModel& model);

}  // namespace optinter::model

#endif  // OPTINTER_MODEL_OPTINTER_MODEL_H_
