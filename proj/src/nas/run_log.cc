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

#include "optinter/nas/run_log.h"

#include <fstream>

#include "optinter/errors.h"

namespace optinter::nas {

nlohmann::ordered_json RunRecord::to_json() const {
  nlohmann::ordered_json j;
  j["stage"] = stage;
  j["epoch"] = epoch;
  j["split"] = split;
  j["auc"] = auc;
  j["logloss"] = logloss;
  j["train_loss"] = train_loss;
  j["tau"] = tau ? nlohmann::ordered_json(*tau) : nlohmann::ordered_json();
  j["param_count"] = param_count;
  return j;
}

std::string RunLog::to_ndjson() const {
  std::string out;
  for (const auto& r : records_) {
    out += r.to_json().dump();
    out += '\n';
  }
  return out;
}

namespace {

void write_text(const std::string& path, const std::string& text,
                std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw FileError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw FileError("write to '" + path + "' failed");
}

}  // namespace

void RunLog::append_to(const std::string& path) const {
  write_text(path, to_ndjson(), std::ios::app);
}

void RunLog::write(const std::string& path) const {
  write_text(path, to_ndjson(), std::ios::trunc);
}

}  // namespace optinter::nas
