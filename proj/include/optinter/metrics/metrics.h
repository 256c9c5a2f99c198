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

#ifndef OPTINTER_METRICS_METRICS_H_
#define OPTINTER_METRICS_METRICS_H_

#include <cstddef>
#include <span>
#include <string>

#include "json.hpp"

namespace optinter::metrics {

// Area under the ROC curve: the probability that a random positive scores
// above a random negative, ties counted as one half. Rank-sum with midranks,
// O(n log n). Throws UndefinedMetricError unless both classes are present and
// DomainError on length mismatch or non-binary labels.
double auc(std::span<const double> scores, std::span<const double> labels);

// Mean negative log-likelihood with scores clamped to [1e-7, 1 - 1e-7].
double logloss(std::span<const double> scores, std::span<const double> labels);

struct EvalReport {
  std::string split;
  double auc = 0.0;
  double logloss = 0.0;
  size_t n_instances = 0;
  size_t param_count = 0;

  nlohmann::ordered_json to_json() const;
  static EvalReport from_json(const nlohmann::json& j);
  // e.g. "test: auc=0.801234 logloss=0.452100 n=2000 params=12345"
  std::string summary() const;
};

EvalReport evaluate(std::span<const double> scores,
                    std::span<const double> labels, std::string split,
                    size_t param_count);

}  // namespace optinter::metrics

#endif  // OPTINTER_METRICS_METRICS_H_
