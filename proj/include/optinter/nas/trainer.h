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

#ifndef OPTINTER_NAS_TRAINER_H_
#define OPTINTER_NAS_TRAINER_H_

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "json.hpp"
#include "optinter/datakit/dataset.h"
#include "optinter/metrics/metrics.h"
#include "optinter/model/optinter_model.h"
#include "optinter/numcore/rng.h"

namespace optinter::nas {

using datakit::Dataset;
using datakit::EncodedInstance;
using model::OptInterModel;

struct TrainLoopConfig {
  size_t batch_size = 256;
  size_t max_epochs = 10;
  size_t patience = 3;    // evaluations without validation AUC improvement
  size_t eval_every = 1;  // epochs between validation evaluations
  uint64_t seed = 0;      // batch order and Gumbel noise

  // Throws ConfigError unless batch_size >= 1 and eval_every >= 1.
  void validate() const;
  // Keys: bs, epochs, patience, eval_every, seed.
  nlohmann::json to_json() const;
  static TrainLoopConfig from_json(const nlohmann::json& j);

  friend bool operator==(const TrainLoopConfig&,
                         const TrainLoopConfig&) = default;
};

// Shuffled mini-batch partition of [0, n), reshuffled every epoch.
class BatchOrder {
 public:
  BatchOrder(size_t n, size_t batch_size, numcore::Rng rng);

  void shuffle();
  size_t num_batches() const;
  std::span<const uint32_t> batch(size_t k) const;

 private:
  size_t batch_size_;
  numcore::Rng rng_;
  std::vector<uint32_t> order_;
};

std::vector<const EncodedInstance*> gather(const Dataset& data,
                                           std::span<const uint32_t> rows);
std::vector<double> gather_labels(const Dataset& data,
                                  std::span<const uint32_t> rows);

// Forward, BCE loss, backward and one Adam step over `scope`. Returns the
// batch loss. Throws NumericError if the loss is not finite.
double train_step(OptInterModel& model, const Dataset& data,
                  std::span<const uint32_t> rows,
                  const model::ForwardOptions& options,
                  model::UpdateScope scope);

// AUC and log loss of the model's predictions on `data`, with the model's
// own parameter count.
metrics::EvalReport evaluate_model(const OptInterModel& model,
                                   const Dataset& data,
                                   const model::ForwardOptions& options = {});

// Tracks the best validation AUC and signals when `patience` consecutive
// evaluations failed to improve it.
class EarlyStopper {
 public:
  explicit EarlyStopper(size_t patience) : patience_(patience) {}

  // Returns true if `auc` is a new best.
  bool observe(double auc);
  bool should_stop() const { return stale_ >= patience_ && seen_; }
  double best() const { return best_; }

 private:
  size_t patience_;
  size_t stale_ = 0;
  bool seen_ = false;
  double best_ = -std::numeric_limits<double>::infinity();
};

}  // namespace optinter::nas

#endif  // OPTINTER_NAS_TRAINER_H_
