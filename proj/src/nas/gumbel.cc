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

#include "optinter/nas/gumbel.h"

#include <algorithm>
#include <cmath>

#include "optinter/errors.h"

namespace optinter::nas {

double gumbel_from_uniform(double u) {
  u = std::clamp(u, kUniformClamp, 1.0 - kUniformClamp);
  return -std::log(-std::log(u));
}

double gumbel_noise(numcore::Rng& rng) {
  return gumbel_from_uniform(rng.uniform());
}

numcore::Tensor2 gumbel_tensor(size_t rows, size_t cols, numcore::Rng& rng) {
  numcore::Tensor2 g(rows, cols);
  for (double& v : g.values()) v = gumbel_noise(rng);
  return g;
}

size_t gumbel_max_sample(std::span<const double> logits, numcore::Rng& rng) {
  if (logits.empty()) throw DomainError("gumbel max: no categories");
  size_t best = 0;
  double best_value = logits[0] + gumbel_noise(rng);
  for (size_t k = 1; k < logits.size(); ++k) {
    const double v = logits[k] + gumbel_noise(rng);
    if (v > best_value) {
      best = k;
      best_value = v;
    }
  }
  return best;
}

}  // namespace optinter::nas
