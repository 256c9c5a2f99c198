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

#ifndef OPTINTER_CLI_RUN_CONFIG_H_
#define OPTINTER_CLI_RUN_CONFIG_H_

#include <string>

#include "json.hpp"
#include "optinter/model/config.h"
#include "optinter/nas/schedule.h"
#include "optinter/nas/search.h"
#include "optinter/nas/trainer.h"

namespace optinter::cli {

// Everything a search or retrain run needs besides its data. The JSON form
// is flat and uses the usual hyper-parameter names (bs, lr_o, lr_c, lr_a,
// l2_o, l2_c, s1, s2, net, LN); loop keys (bs, epochs, patience,
// eval_every) at top level apply to both stages and may be overridden inside
// "search" and "retrain" objects. "seed" seeds the model and both loops.
struct RunConfig {
  model::ModelConfig model;
  nas::TrainLoopConfig search_loop;
  nas::TrainLoopConfig retrain_loop;
  nas::TemperatureSchedule schedule;
  bool gumbel_on = true;
  nas::SearchStrategy strategy = nas::SearchStrategy::kJoint;
  uint64_t seed = 0;

  // Parses and validates every field. Throws ConfigError.
  static RunConfig from_json(const nlohmann::json& j);
  // The fully resolved form; from_json(to_json()) gives the same config.
  nlohmann::ordered_json to_json() const;
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Reads a JSON file, then applies `overrides` as a JSON merge patch.
// Throws FileError when the file is unreadable and ConfigError on bad JSON.
nlohmann::json load_config_json(const std::string& path,
                                const nlohmann::json& overrides);

}  // namespace optinter::cli

#endif  // OPTINTER_CLI_RUN_CONFIG_H_
