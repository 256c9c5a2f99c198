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

#ifndef OPTINTER_NAS_GUMBEL_H_
#define OPTINTER_NAS_GUMBEL_H_

#include <span>

#include "optinter/numcore/rng.h"
#include "optinter/numcore/tensor.h"

namespace optinter::nas {

inline constexpr double kUniformClamp = 1e-12;

// -log(-log u) with u clamped to [1e-12, 1 - 1e-12].
double gumbel_from_uniform(double u);
double gumbel_noise(numcore::Rng& rng);
// rows x cols independent draws, row-major.
numcore::Tensor2 gumbel_tensor(size_t rows, size_t cols, numcore::Rng& rng);
// argmax_k (logits[k] + g_k): one Gumbel-max sample.
size_t gumbel_max_sample(std::span<const double> logits, numcore::Rng& rng);

}  // namespace optinter::nas

#endif  // OPTINTER_NAS_GUMBEL_H_
