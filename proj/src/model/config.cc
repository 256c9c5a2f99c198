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

#include "optinter/model/config.h"

#include "optinter/errors.h"

namespace optinter::model {

void ModelConfig::validate() const {
  if (s1 < 1 || s2 < 1) throw ConfigError("model: s1 and s2 must be >= 1");
  for (uint32_t w : mlp_layers) {
    if (w < 1) throw ConfigError("model: MLP widths must be >= 1");
  }
  if (!(lr_o > 0.0) || !(lr_c > 0.0) || !(lr_a > 0.0)) {
    throw ConfigError("model: learning rates must be positive");
  }
  if (!(l2_o >= 0.0) || !(l2_c >= 0.0)) {
    throw ConfigError("model: l2 strengths must be non-negative");
  }
  if (!(ln_eps > 0.0)) throw ConfigError("model: ln_eps must be positive");
  if (!(adam_eps > 0.0) || !(adam_beta1 > 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 > 0.0 && adam_beta2 < 1.0)) {
    throw ConfigError("model: Adam hyperparameters out of range");
  }
  if (!(embedding_init >= 0.0)) {
    throw ConfigError("model: embedding_init must be non-negative");
  }
}

nlohmann::json ModelConfig::to_json() const {
  return {{"s1", s1},         {"s2", s2},
          {"net", mlp_layers}, {"LN", layer_norm},
          {"ln_eps", ln_eps},  {"seed", seed},
          {"l2_o", l2_o},      {"l2_c", l2_c},
          {"lr_o", lr_o},      {"lr_c", lr_c},
          {"lr_a", lr_a},      {"adam_beta1", adam_beta1},
          {"adam_beta2", adam_beta2}, {"adam_eps", adam_eps},
          {"embedding_init", embedding_init}};
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  ModelConfig c;
  try {
    c.s1 = j.value("s1", c.s1);
    c.s2 = j.value("s2", c.s2);
    c.mlp_layers = j.value("net", c.mlp_layers);
    c.layer_norm = j.value("LN", c.layer_norm);
    c.ln_eps = j.value("ln_eps", c.ln_eps);
    c.seed = j.value("seed", c.seed);
    c.l2_o = j.value("l2_o", c.l2_o);
    c.l2_c = j.value("l2_c", c.l2_c);
    c.lr_o = j.value("lr_o", c.lr_o);
    c.lr_c = j.value("lr_c", c.lr_c);
    c.lr_a = j.value("lr_a", c.lr_a);
    c.adam_beta1 = j.value("adam_beta1", c.adam_beta1);
    c.adam_beta2 = j.value("adam_beta2", c.adam_beta2);
    c.adam_eps = j.value("adam_eps", c.adam_eps);
    c.embedding_init = j.value("embedding_init", c.embedding_init);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("model config: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace optinter::model
