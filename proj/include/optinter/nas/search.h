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

#ifndef OPTINTER_NAS_SEARCH_H_
#define OPTINTER_NAS_SEARCH_H_

#include <string_view>
#include <vector>

#include "optinter/model/architecture.h"
#include "optinter/model/optinter_model.h"
#include "optinter/nas/run_log.h"
#include "optinter/nas/schedule.h"
#include "optinter/nas/trainer.h"

namespace optinter::nas {

using model::ArchitectureDecision;

enum class SearchStrategy { kJoint, kBilevel, kRandom };
std::string_view to_string(SearchStrategy strategy);
SearchStrategy parse_search_strategy(std::string_view text);

struct SearchOptions {
  TemperatureSchedule schedule;
  // Adds Gumbel noise inside the softmax during training steps; evaluation
  // never uses noise.
  bool gumbel_on = true;
};

struct SearchResult {
  numcore::Tensor2 log_alpha;  // final architecture parameters, [P x 3]
  ArchitectureDecision decision;
  RunLog trace;
  size_t epochs_run = 0;
  double final_tau = 1.0;  // temperature of the last epoch run
};

// Per-pair argmax of alpha (any monotone transform of it, e.g. log alpha),
// ties resolved memorize, then factorize, then naive.
ArchitectureDecision derive_architecture(const numcore::Tensor2& alpha,
                                         size_t num_fields);

// Joint search: every mini-batch updates network weights and architecture
// parameters together from one forward/backward pass on training data.
// Temperature follows `options.schedule` per epoch; stops early when
// validation AUC has not improved for `loop.patience` evaluations. Returns
// the final (not best) architecture parameters. Throws ConfigError unless
// the model is relaxed and NumericError on divergence.
SearchResult search(const Dataset& train, const Dataset& validation,
                    OptInterModel& model, const SearchOptions& options,
                    const TrainLoopConfig& loop);

// Alternating variant: a weight step on a training batch, then an
// architecture step on a validation batch. Validation must be non-empty.
SearchResult bilevel_search(const Dataset& train, const Dataset& validation,
                            OptInterModel& model, const SearchOptions& options,
                            const TrainLoopConfig& loop);

// Independent uniform draw over the three methods for every pair.
std::vector<model::Method> random_methods(size_t num_pairs, numcore::Rng& rng);
ArchitectureDecision random_architecture(size_t num_fields, numcore::Rng& rng);

struct RetrainResult {
  OptInterModel model;  // restored to the best validation snapshot
  RunLog trace;
  double best_validation_auc = 0.0;
  size_t best_epoch = 0;  // 0 when no validation evaluation happened
  size_t epochs_run = 0;
};

// Trains a fixed-architecture model from its initial weights. Without a
// validation set the final weights are returned.
RetrainResult retrain(const Dataset& train, const Dataset& validation,
                      OptInterModel fresh_model, const TrainLoopConfig& loop);

}  // namespace optinter::nas

#endif  // OPTINTER_NAS_SEARCH_H_
