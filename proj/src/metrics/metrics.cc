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

#include "optinter/metrics/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

#include "optinter/errors.h"

namespace optinter::metrics {

namespace {

constexpr double kClamp = 1e-7;

void check_inputs(std::span<const double> scores,
                  std::span<const double> labels, const char* what) {
  if (scores.size() != labels.size()) {
    throw DomainError(std::string(what) + ": " + std::to_string(scores.size()) +
                      " scores vs " + std::to_string(labels.size()) +
                      " labels");
  }
  for (double y : labels) {
    if (y != 0.0 && y != 1.0) {
      throw DomainError(std::string(what) + ": labels must be 0 or 1");
    }
  }
}

}  // namespace

double auc(std::span<const double> scores, std::span<const double> labels) {
  check_inputs(scores, labels, "auc");
  const size_t n = scores.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });

  // Sum of doubled midranks of the positives keeps everything integral.
  uint64_t rank_sum2 = 0;
  uint64_t positives = 0;
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const uint64_t midrank2 = i + 1 + j;  // 2 * mean of ranks i+1..j
    for (size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1.0) {
        rank_sum2 += midrank2;
        ++positives;
      }
    }
    i = j;
  }
  const uint64_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw UndefinedMetricError("auc: needs both positive and negative labels");
  }
  // 2U = rank_sum2 - P(P+1); AUC = U / (P N).
  const uint64_t u2 = rank_sum2 - positives * (positives + 1);
  return static_cast<double>(u2) /
         (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
}

double logloss(std::span<const double> scores, std::span<const double> labels) {
  check_inputs(scores, labels, "logloss");
  if (scores.empty()) throw DomainError("logloss: empty input");
  double total = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    const double p = std::clamp(scores[i], kClamp, 1.0 - kClamp);
    total -= labels[i] == 1.0 ? std::log(p) : std::log1p(-p);
  }
  return total / static_cast<double>(scores.size());
}

nlohmann::ordered_json EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["split"] = split;
  j["auc"] = auc;
  j["logloss"] = logloss;
  j["n_instances"] = n_instances;
  j["param_count"] = param_count;
  return j;
}

EvalReport EvalReport::from_json(const nlohmann::json& j) {
  EvalReport r;
  try {
    r.split = j.at("split").get<std::string>();
    r.auc = j.at("auc").get<double>();
    r.logloss = j.at("logloss").get<double>();
    r.n_instances = j.at("n_instances").get<size_t>();
    r.param_count = j.at("param_count").get<size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("eval report: ") + e.what());
  }
  return r;
}

std::string EvalReport::summary() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s: auc=%.6f logloss=%.6f n=%zu params=%zu",
                split.c_str(), auc, logloss, n_instances, param_count);
  return buf;
}

EvalReport evaluate(std::span<const double> scores,
                    std::span<const double> labels, std::string split,
                    size_t param_count) {
  EvalReport r;
  r.split = std::move(split);
  r.auc = auc(scores, labels);
  r.logloss = logloss(scores, labels);
  r.n_instances = scores.size();
  r.param_count = param_count;
  return r;
}

}  // namespace optinter::metrics
