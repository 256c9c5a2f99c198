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

#ifndef OPTINTER_NUMCORE_ADAM_H_
#define OPTINTER_NUMCORE_ADAM_H_

#include <cstdint>
#include <span>
#include <string>

#include "optinter/numcore/tensor.h"

namespace optinter::numcore {

// A trainable block: value, accumulated gradient and Adam moments.
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, Tensor2 value);

  std::string name;
  Tensor2 value;
  Tensor2 grad;
  Tensor2 m;
  Tensor2 v;
  int64_t step = 0;

  size_t size() const { return value.size(); }
  void zero_grad() { grad.fill(0.0); }
};

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double l2 = 0.0;  // added to the gradient as l2 * value
};

void validate(const AdamConfig& cfg);

// Dense Adam step with bias correction. Zeroes the gradient afterwards.
// Throws NumericError, leaving the parameter untouched, if the gradient holds
// a non-finite entry.
void adam_step(Parameter& p, const AdamConfig& cfg);

// Lazy variant for embedding tables: only the listed rows are regularized,
// moved and have their moments updated. The step counter still advances once
// per call, so bias correction follows the global step. Listed rows must be
// unique.
void adam_step_rows(Parameter& p, std::span<const uint32_t> rows,
                    const AdamConfig& cfg);

}  // namespace optinter::numcore

#endif  // OPTINTER_NUMCORE_ADAM_H_
