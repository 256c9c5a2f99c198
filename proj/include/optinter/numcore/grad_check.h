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

#ifndef OPTINTER_NUMCORE_GRAD_CHECK_H_
#define OPTINTER_NUMCORE_GRAD_CHECK_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "optinter/numcore/adam.h"

namespace optinter::numcore {

struct GradCheckOptions {
  double step = 1e-5;
  double tolerance = 1e-4;
  // Denominator floor for the relative error |a - n| / max(|a|, |n|, floor),
  // so entries whose true gradient is zero are judged on absolute error.
  double abs_floor = 1e-6;
  // 0 checks every entry; otherwise an evenly strided subset of this size.
  size_t max_entries_per_block = 0;
};

struct BlockReport {
  std::string name;
  size_t checked = 0;
  double max_rel_error = 0.0;
  size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

struct GradCheckReport {
  std::vector<BlockReport> blocks;
  double max_rel_error = 0.0;
  bool passed = false;
};

// Compares analytic gradients against central finite differences.
//   loss:          evaluates the scalar objective at the current values.
//   compute_grads: fills Parameter::grad for every block (after zeroing).
// Parameter values are restored exactly after each perturbation. A
// non-finite loss evaluation raises NumericError.
GradCheckReport grad_check(const std::function<double()>& loss,
                           const std::function<void()>& compute_grads,
                           std::span<Parameter* const> params,
                           const GradCheckOptions& options = {});

}  // namespace optinter::numcore

#endif  // OPTINTER_NUMCORE_GRAD_CHECK_H_
