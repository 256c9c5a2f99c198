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

#include "optinter/nas/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "optinter/errors.h"
#include "optinter/numcore/ops.h"

namespace optinter::nas {

void TrainLoopConfig::validate() const {
  if (batch_size == 0) throw ConfigError("bs must be at least 1");
  if (eval_every == 0) throw ConfigError("eval_every must be at least 1");
}

nlohmann::json TrainLoopConfig::to_json() const {
  return {{"bs", batch_size},
          {"epochs", max_epochs},
          {"patience", patience},
          {"eval_every", eval_every},
          {"seed", seed}};
}

TrainLoopConfig TrainLoopConfig::from_json(const nlohmann::json& j) {
  TrainLoopConfig c;
  try {
    c.batch_size = j.value("bs", c.batch_size);
    c.max_epochs = j.value("epochs", c.max_epochs);
    c.patience = j.value("patience", c.patience);
    c.eval_every = j.value("eval_every", c.eval_every);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("train loop config: ") + e.what());
  }
  c.validate();
  return c;
}

BatchOrder::BatchOrder(size_t n, size_t batch_size, numcore::Rng rng)
    : batch_size_(batch_size), rng_(rng), order_(n) {
  if (batch_size == 0) throw ConfigError("bs must be at least 1");
  std::iota(order_.begin(), order_.end(), uint32_t{0});
}

void BatchOrder::shuffle() {
  for (size_t i = order_.size(); i > 1; --i) {
    const size_t j = rng_.uniform_int(i);
    std::swap(order_[i - 1], order_[j]);
  }
}

size_t BatchOrder::num_batches() const {
  return (order_.size() + batch_size_ - 1) / batch_size_;
}

std::span<const uint32_t> BatchOrder::batch(size_t k) const {
  const size_t begin = k * batch_size_;
  const size_t end = std::min(order_.size(), begin + batch_size_);
  return std::span<const uint32_t>(order_).subspan(begin, end - begin);
}

std::vector<const EncodedInstance*> gather(const Dataset& data,
                                           std::span<const uint32_t> rows) {
  std::vector<const EncodedInstance*> out;
  out.reserve(rows.size());
  for (uint32_t r : rows) out.push_back(&data[r]);
  return out;
}

std::vector<double> gather_labels(const Dataset& data,
                                  std::span<const uint32_t> rows) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (uint32_t r : rows) out.push_back(data[r].label);
  return out;
}

double train_step(OptInterModel& model, const Dataset& data,
                  std::span<const uint32_t> rows,
                  const model::ForwardOptions& options,
                  model::UpdateScope scope) {
  const auto batch = gather(data, rows);
  const auto labels = gather_labels(data, rows);
  model::ForwardCache cache;
  const numcore::Tensor2 logits = model.forward(batch, options, &cache);
  const numcore::LossResult loss = numcore::bce_with_logits(logits, labels);
  if (!std::isfinite(loss.loss) || !logits.all_finite()) {
    throw NumericError("training diverged: non-finite loss on a batch of " +
                       std::to_string(rows.size()) + " instances");
  }
  model.backward(cache, loss.grad);
  model.apply_adam(scope);
  return loss.loss;
}

metrics::EvalReport evaluate_model(const OptInterModel& model,
                                   const Dataset& data,
                                   const model::ForwardOptions& options) {
  const std::vector<double> scores = model.predict(data, options);
  for (double s : scores) {
    if (!std::isfinite(s)) throw NumericError("non-finite prediction");
  }
  return metrics::evaluate(scores, data.labels(),
                           std::string(datakit::to_string(data.split())),
                           model::count_parameters(model).total());
}

bool EarlyStopper::observe(double auc) {
  seen_ = true;
  if (auc > best_) {
    best_ = auc;
    stale_ = 0;
    return true;
  }
  ++stale_;
  return false;
}

}  // namespace optinter::nas
