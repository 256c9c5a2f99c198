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

#ifndef OPTINTER_NAS_RUN_LOG_H_
#define OPTINTER_NAS_RUN_LOG_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace optinter::nas {

struct RunRecord {
  std::string stage;  // "search", "bilevel" or "retrain"
  size_t epoch = 0;   // 1-based
  std::string split;
  double auc = 0.0;
  double logloss = 0.0;
  double train_loss = 0.0;  // mean mini-batch loss over the epoch
  std::optional<double> tau;
  size_t param_count = 0;

  nlohmann::ordered_json to_json() const;
};

// Newline-delimited JSON, one record per evaluation.
class RunLog {
 public:
  void add(const RunRecord& record) { records_.push_back(record); }
  const std::vector<RunRecord>& records() const { return records_; }
  size_t size() const { return records_.size(); }
  std::string to_ndjson() const;
  void append_to(const std::string& path) const;
  void write(const std::string& path) const;

 private:
  std::vector<RunRecord> records_;
};

}  // namespace optinter::nas

#endif  // OPTINTER_NAS_RUN_LOG_H_
