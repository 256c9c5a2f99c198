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

#include "optinter/nas/search.h"

#include <utility>

#include "optinter/errors.h"
#include "optinter/nas/gumbel.h"

namespace optinter::nas {

std::string_view to_string(SearchStrategy strategy) {
  switch (strategy) {
    case SearchStrategy::kJoint:
      return "joint";
    case SearchStrategy::kBilevel:
      return "bilevel";
    case SearchStrategy::kRandom:
      return "random";
  }
  return "joint";
}

SearchStrategy parse_search_strategy(std::string_view text) {
  if (text == "joint") return SearchStrategy::kJoint;
  if (text == "bilevel") return SearchStrategy::kBilevel;
  if (text == "random") return SearchStrategy::kRandom;
  throw ConfigError("unknown search strategy '" + std::string(text) + "'");
}

ArchitectureDecision derive_architecture(const numcore::Tensor2& alpha,
                                         size_t num_fields) {
  std::vector<model::Method> methods;
  methods.reserve(alpha.rows());
  if (alpha.cols() != model::kNumMethods && alpha.rows() > 0) {
    throw ShapeError("architecture parameters must have 3 columns, got " +
                     alpha.shape_string());
  }
  for (size_t p = 0; p < alpha.rows(); ++p) {
    size_t best = 0;
    for (size_t k = 1; k < model::kNumMethods; ++k) {
      if (alpha(p, k) > alpha(p, best)) best = k;
    }
    methods.push_back(model::kAllMethods[best]);
  }
  return ArchitectureDecision(num_fields, std::move(methods));
}

namespace {

// Stream tags for the loop's random generators.
constexpr uint64_t kShuffleStream = 1;
constexpr uint64_t kGumbelStream = 2;
constexpr uint64_t kValidationStream = 3;

void require_relaxed(const OptInterModel& model) {
  if (!model.relaxed()) {
    throw ConfigError("search needs a model without a fixed decision");
  }
  if (model.dims().num_pairs() == 0) {
    throw ConfigError("search needs at least one field pair");
  }
}

void require_train(const Dataset& train) {
  if (train.empty()) throw DomainError("training split is empty");
}

RunRecord eval_record(const OptInterModel& model, const Dataset& data,
                      const model::ForwardOptions& options,
                      std::string_view stage, size_t epoch,
                      double train_loss) {
  const auto report = evaluate_model(model, data, options);
  RunRecord r;
  r.stage = stage;
  r.epoch = epoch;
  r.split = report.split;
  r.auc = report.auc;
  r.logloss = report.logloss;
  r.train_loss = train_loss;
  r.param_count = report.param_count;
  return r;
}

// The part shared by joint and bilevel search; `step` runs one epoch and
// returns its mean training loss.
template <typename EpochFn>
SearchResult run_search(const Dataset& validation, OptInterModel& model,
                        const SearchOptions& options,
                        const TrainLoopConfig& loop, std::string_view stage,
                        EpochFn&& run_epoch) {
  options.schedule.validate();
  loop.validate();
  SearchResult result;
  result.final_tau = options.schedule.tau_start;
  EarlyStopper stopper(loop.patience);
  for (size_t epoch = 0; epoch < loop.max_epochs; ++epoch) {
    const double tau = options.schedule.tau_at(epoch, loop.max_epochs);
    const double train_loss = run_epoch(tau);
    result.epochs_run = epoch + 1;
    result.final_tau = tau;
    if ((epoch + 1) % loop.eval_every != 0 || validation.empty()) continue;
    model::ForwardOptions eval_opts;
    eval_opts.tau = tau;
    RunRecord r =
        eval_record(model, validation, eval_opts, stage, epoch + 1, train_loss);
    r.tau = tau;
    result.trace.add(r);
    stopper.observe(r.auc);
    if (stopper.should_stop()) break;
  }
  result.log_alpha = model.arch_logits().value;
  result.decision =
      derive_architecture(result.log_alpha, model.dims().num_fields());
  return result;
}

}  // namespace

SearchResult search(const Dataset& train, const Dataset& validation,
                    OptInterModel& model, const SearchOptions& options,
                    const TrainLoopConfig& loop) {
  require_relaxed(model);
  require_train(train);
  const numcore::Rng root(loop.seed);
  BatchOrder order(train.size(), loop.batch_size, root.fork(kShuffleStream));
  numcore::Rng noise_rng = root.fork(kGumbelStream);
  const size_t num_pairs = model.dims().num_pairs();

  return run_search(validation, model, options, loop, "search", [&](double tau) {
    order.shuffle();
    double total = 0.0;
    for (size_t b = 0; b < order.num_batches(); ++b) {
      model::ForwardOptions opts;
      opts.tau = tau;
      numcore::Tensor2 noise;
      if (options.gumbel_on) {
        noise = gumbel_tensor(num_pairs, model::kNumMethods, noise_rng);
        opts.gumbel = &noise;
      }
      total += train_step(model, train, order.batch(b), opts,
                          model::UpdateScope::kAll);
    }
    return total / static_cast<double>(order.num_batches());
  });
}

SearchResult bilevel_search(const Dataset& train, const Dataset& validation,
                            OptInterModel& model, const SearchOptions& options,
                            const TrainLoopConfig& loop) {
  require_relaxed(model);
  require_train(train);
  if (validation.empty()) {
    throw DomainError("bilevel search needs a non-empty validation split");
  }
  const numcore::Rng root(loop.seed);
  BatchOrder order(train.size(), loop.batch_size, root.fork(kShuffleStream));
  BatchOrder val_order(validation.size(), loop.batch_size,
                       root.fork(kValidationStream));
  numcore::Rng noise_rng = root.fork(kGumbelStream);
  const size_t num_pairs = model.dims().num_pairs();
  size_t val_cursor = val_order.num_batches();

  return run_search(
      validation, model, options, loop, "bilevel", [&](double tau) {
        order.shuffle();
        double total = 0.0;
        for (size_t b = 0; b < order.num_batches(); ++b) {
          model::ForwardOptions opts;
          opts.tau = tau;
          numcore::Tensor2 noise;
          if (options.gumbel_on) {
            noise = gumbel_tensor(num_pairs, model::kNumMethods, noise_rng);
            opts.gumbel = &noise;
          }
          total += train_step(model, train, order.batch(b), opts,
                              model::UpdateScope::kWeightsOnly);
          if (val_cursor == val_order.num_batches()) {
            val_order.shuffle();
            val_cursor = 0;
          }
          if (options.gumbel_on) {
            noise = gumbel_tensor(num_pairs, model::kNumMethods, noise_rng);
          }
          train_step(model, validation, val_order.batch(val_cursor++), opts,
                     model::UpdateScope::kArchitectureOnly);
        }
        return total / static_cast<double>(order.num_batches());
      });
}

std::vector<model::Method> random_methods(size_t num_pairs, numcore::Rng& rng) {
  std::vector<model::Method> out;
  out.reserve(num_pairs);
  for (size_t p = 0; p < num_pairs; ++p) {
    out.push_back(model::kAllMethods[rng.uniform_int(model::kNumMethods)]);
  }
  return out;
}

ArchitectureDecision random_architecture(size_t num_fields, numcore::Rng& rng) {
  const size_t num_pairs = num_fields < 2 ? 0 : num_fields * (num_fields - 1) / 2;
  return ArchitectureDecision(num_fields, random_methods(num_pairs, rng));
}

RetrainResult retrain(const Dataset& train, const Dataset& validation,
                      OptInterModel fresh_model, const TrainLoopConfig& loop) {
  if (fresh_model.relaxed()) {
    throw ConfigError("retrain needs a model with a fixed decision");
  }
  require_train(train);
  loop.validate();
  const numcore::Rng root(loop.seed);
  BatchOrder order(train.size(), loop.batch_size, root.fork(kShuffleStream));

  RetrainResult result{std::move(fresh_model), {}, 0.0, 0, 0};
  OptInterModel& model = result.model;
  std::vector<numcore::Tensor2> best;
  EarlyStopper stopper(loop.patience);
  for (size_t epoch = 0; epoch < loop.max_epochs; ++epoch) {
    order.shuffle();
    double total = 0.0;
    for (size_t b = 0; b < order.num_batches(); ++b) {
      total += train_step(model, train, order.batch(b), {},
                          model::UpdateScope::kAll);
    }
    const double train_loss = total / static_cast<double>(order.num_batches());
    result.epochs_run = epoch + 1;
    if ((epoch + 1) % loop.eval_every != 0 || validation.empty()) continue;
    RunRecord r =
        eval_record(model, validation, {}, "retrain", epoch + 1, train_loss);
    result.trace.add(r);
    if (stopper.observe(r.auc)) {
      result.best_validation_auc = r.auc;
      result.best_epoch = epoch + 1;
      best.clear();
      for (const auto* p : std::as_const(model).parameters()) {
        best.push_back(p->value);
      }
    }
    if (stopper.should_stop()) break;
  }
  if (!best.empty()) {
    const auto params = model.parameters();
    for (size_t k = 0; k < params.size(); ++k) {
      params[k]->value = std::move(best[k]);
    }
  }
  return result;
}

}  // namespace optinter::nas
