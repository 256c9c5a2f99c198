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

#ifndef OPTINTER_MODEL_CONFIG_H_
#define OPTINTER_MODEL_CONFIG_H_

#include <cstdint>
#include <vector>

#include "json.hpp"

namespace optinter::model {

// Network hyperparameters. JSON keys follow the usual CTR naming:
// s1, s2, net, LN, l2_o, l2_c, lr_o, lr_c, lr_a.
struct ModelConfig {
  uint32_t s1 = 8;                       // original embedding size
  uint32_t s2 = 8;                       // cross-product embedding size
  std::vector<uint32_t> mlp_layers = {64, 32};  // hidden widths; may be empty
  bool layer_norm = true;
  double ln_eps = 1e-5;
  uint64_t seed = 0;
  double l2_o = 0.0;   // on original embedding rows
  double l2_c = 0.0;   // on cross-product embedding rows
  double lr_o = 1e-3;  // original embeddings and network weights
  double lr_c = 1e-3;  // cross-product embeddings
  double lr_a = 1e-3;  // architecture parameters
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  // Embedding rows start uniform on +-embedding_init; 0 selects the Xavier
  // bound of the [vocab x dim] table.
  double embedding_init = 0.0;

  void validate() const;
  nlohmann::json to_json() const;
  // Missing keys keep their defaults; unknown keys are ignored.
  static ModelConfig from_json(const nlohmann::json& j);

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

}  // namespace optinter::model

#endif  // OPTINTER_MODEL_CONFIG_H_
