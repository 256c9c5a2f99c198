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

#ifndef OPTINTER_CLI_COMMANDS_H_
#define OPTINTER_CLI_COMMANDS_H_

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "optinter/cli/run_config.h"
#include "optinter/datakit/dataset.h"
#include "optinter/datakit/vocabulary.h"
#include "optinter/metrics/metrics.h"
#include "optinter/model/architecture.h"

namespace optinter::cli {

// Relative output directories are placed under this directory when set.
inline constexpr char kRunRootEnv[] = "OPTINTER_RUN_ROOT";

// `out` if absolute; otherwise joined onto $OPTINTER_RUN_ROOT (or the working
// directory when unset). An empty `out` becomes "<command>-<key prefix>".
std::string resolve_run_dir(const std::string& out, const std::string& command,
                            const std::string& key);

// FNV-1a 64 of a file's bytes, hex encoded. Throws FileError.
std::string file_hash(const std::string& path);

// A prepared data directory: vocabulary plus the three encoded splits.
struct PreparedData {
  std::shared_ptr<const datakit::Vocabulary> vocabulary;
  datakit::Dataset train;
  datakit::Dataset validation;
  datakit::Dataset test;
  std::vector<std::string> files;  // inputs, for manifests

  const datakit::Dataset& split(datakit::Split s) const;
};
PreparedData load_prepared(const std::string& data_dir);

// Writes train/validation/test CSVs, schema.json, spec.json and
// ground_truth.json (memorize / factorize / naive per planted kind).
void cmd_gen_data(const std::string& spec_path, const std::string& out_dir,
                  std::optional<uint64_t> seed);

struct PrepareArgs {
  // One file (split by `fractions`) or three files (train, validation, test).
  std::vector<std::string> csv_paths;
  std::string schema_path;
  datakit::VocabularyOptions vocabulary;
  std::array<double, 3> fractions = {0.8, 0.1, 0.1};
  uint64_t split_seed = 0;
  std::string out_dir;
};
// Builds the vocabulary on the train split and writes vocabulary.txt,
// schema.json and {train,validation,test}.tsv.
void cmd_prepare(const PrepareArgs& args);

// Runs the configured strategy and writes config.json, decision.json,
// search_log.ndjson and, for trained strategies, alpha.json and
// search.ckpt.
model::ArchitectureDecision cmd_search(const RunConfig& config,
                                       const std::string& data_dir,
                                       const std::string& out_dir);

// `arch` is search, all-memorize, all-factorize, all-naive or file:<path>.
// "search" reads decision.json from `search_dir`, or runs a search into
// <out_dir>/search when `search_dir` is empty.
model::ArchitectureDecision resolve_architecture(const std::string& arch,
                                                 const RunConfig& config,
                                                 const std::string& data_dir,
                                                 const std::string& out_dir,
                                                 const std::string& search_dir,
                                                 size_t num_fields);

// Retrains the chosen architecture from scratch and writes config.json,
// decision.json, retrain_log.ndjson, model.ckpt and eval.json.
metrics::EvalReport cmd_retrain(const RunConfig& config, const std::string& arch,
                                const std::string& data_dir,
                                const std::string& out_dir,
                                const std::string& search_dir = "");

metrics::EvalReport cmd_eval(const std::string& checkpoint,
                             const std::string& data_dir,
                             datakit::Split split);

// `split` is train, validation, test or all. Writes mi_heatmap.csv and
// mi_groups.json (group means need a decision).
nlohmann::ordered_json cmd_analyze_mi(const std::string& data_dir,
                                      const std::string& decision_path,
                                      const std::string& split,
                                      const std::string& out_dir);

// Paired comparison of retrain runs: baseline[k] against candidate[k], on
// the test AUC and log loss stored in each run's eval.json.
nlohmann::ordered_json cmd_compare(const std::vector<std::string>& baseline,
                                   const std::vector<std::string>& candidate);

}  // namespace optinter::cli

#endif  // OPTINTER_CLI_COMMANDS_H_
