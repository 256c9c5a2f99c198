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

#include "optinter/cli/run_config.h"

#include <fstream>
#include <set>

#include "optinter/errors.h"

namespace optinter::cli {
namespace {

const char* const kLoopKeys[] = {"bs", "epochs", "patience", "eval_every"};

const std::set<std::string, std::less<>> kKnownKeys = {
    "seed",     "strategy",   "gumbel_on",  "s1",         "s2",
    "net",      "LN",         "ln_eps",     "l2_o",       "l2_c",
    "lr_o",     "lr_c",       "lr_a",       "adam_beta1", "adam_beta2",
    "adam_eps", "embedding_init", "tau_start", "tau_end", "bs",
    "epochs",   "patience",   "eval_every", "search",     "retrain"};

nas::TrainLoopConfig parse_loop(const nlohmann::json& top, const char* stage,
                                uint64_t seed) {
  nlohmann::json j = nlohmann::json::object();
  for (const char* key : kLoopKeys) {
    if (top.contains(key)) j[key] = top[key];
  }
  if (top.contains(stage)) {
    if (!top[stage].is_object()) {
      throw ConfigError(std::string("config: '") + stage +
                        "' must be an object");
    }
    j.merge_patch(top[stage]);
  }
  j["seed"] = seed;
  return nas::TrainLoopConfig::from_json(j);
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    // A typo would otherwise silently fall back to a default.
    if (!kKnownKeys.contains(key)) {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  RunConfig c;
  try {
    c.seed = j.value("seed", c.seed);
    nlohmann::json m = j;
    m["seed"] = c.seed;
    c.model = model::ModelConfig::from_json(m);
    c.search_loop = parse_loop(j, "search", c.seed);
    c.retrain_loop = parse_loop(j, "retrain", c.seed);
    c.schedule = nas::TemperatureSchedule::from_json(j);
    c.gumbel_on = j.value("gumbel_on", c.gumbel_on);
    c.strategy =
        nas::parse_search_strategy(j.value("strategy", std::string("joint")));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

void RunConfig::validate() const {
  model.validate();
  search_loop.validate();
  retrain_loop.validate();
  schedule.validate();
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["strategy"] = std::string(nas::to_string(strategy));
  j["gumbel_on"] = gumbel_on;
  const nlohmann::json mj = model.to_json();
  for (const auto& [k, v] : mj.items()) {
    if (k != "seed") j[k] = v;
  }
  const nlohmann::json sj = schedule.to_json();
  for (const auto& [k, v] : sj.items()) j[k] = v;
  for (const auto& [stage, loop] :
       {std::pair{"search", &search_loop}, std::pair{"retrain", &retrain_loop}}) {
    nlohmann::ordered_json s;
    const auto lj = loop->to_json();
    for (const char* key : kLoopKeys) s[key] = lj.at(key);
    j[stage] = s;
  }
  return j;
}

nlohmann::json load_config_json(const std::string& path,
                                const nlohmann::json& overrides) {
  nlohmann::json j = nlohmann::json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open config '" + path + "'");
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config '" + path + "': " + e.what());
    }
  }
  j.merge_patch(overrides);
  return j;
}

}  // namespace optinter::cli
