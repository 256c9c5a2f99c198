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

#include "optinter/numcore/grad_check.h"

#include <algorithm>
#include <cmath>

#include "optinter/errors.h"

namespace optinter::numcore {

namespace {

double eval_finite(const std::function<double()>& loss, const Parameter& p,
                   size_t index) {
  const double value = loss();
  if (!std::isfinite(value)) {
    throw NumericError("grad_check: non-finite loss while perturbing '" +
                       p.name + "'[" + std::to_string(index) + "]");
  }
  return value;
}

}  // namespace

GradCheckReport grad_check(const std::function<double()>& loss,
                           const std::function<void()>& compute_grads,
                           std::span<Parameter* const> params,
                           const GradCheckOptions& options) {
  if (!(options.step > 0.0)) throw DomainError("grad_check: step must be > 0");
  for (Parameter* p : params) p->zero_grad();
  compute_grads();
  std::vector<Tensor2> analytic;
  analytic.reserve(params.size());
  for (Parameter* p : params) analytic.push_back(p->grad);

  GradCheckReport report;
  for (size_t b = 0; b < params.size(); ++b) {
    Parameter& p = *params[b];
    BlockReport block;
    block.name = p.name;
    const size_t n = p.size();
    size_t stride = 1;
    if (options.max_entries_per_block > 0 && n > options.max_entries_per_block) {
      stride = (n + options.max_entries_per_block - 1) /
               options.max_entries_per_block;
    }
    for (size_t i = 0; i < n; i += stride) {
      const double original = p.value[i];
      p.value[i] = original + options.step;
      const double plus = eval_finite(loss, p, i);
      p.value[i] = original - options.step;
      const double minus = eval_finite(loss, p, i);
      p.value[i] = original;
      const double numeric = (plus - minus) / (2.0 * options.step);
      const double a = analytic[b][i];
      const double denom =
          std::max({std::abs(a), std::abs(numeric), options.abs_floor});
      const double rel = std::abs(a - numeric) / denom;
      ++block.checked;
      if (rel > block.max_rel_error || block.checked == 1) {
        block.max_rel_error = std::max(block.max_rel_error, rel);
        if (rel >= block.max_rel_error) {
          block.worst_index = i;
          block.worst_analytic = a;
          block.worst_numeric = numeric;
        }
      }
    }
    report.max_rel_error = std::max(report.max_rel_error, block.max_rel_error);
    report.blocks.push_back(std::move(block));
  }
  report.passed = report.max_rel_error < options.tolerance;
  return report;
}

}  // namespace optinter::numcore
