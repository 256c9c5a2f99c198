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

#ifndef OPTINTER_METRICS_TTEST_H_
#define OPTINTER_METRICS_TTEST_H_

#include <cstddef>
#include <span>

namespace optinter::metrics {

struct PairedTTest {
  size_t n = 0;
  double mean_diff = 0.0;  // mean of a - b
  double sd_diff = 0.0;    // sample standard deviation of a - b
  double t = 0.0;
  double dof = 0.0;
  double p_value = 1.0;    // two-tailed
};

// Two-tailed paired t-test of a against b. Throws DomainError unless the
// samples have equal length n >= 2. When the differences have zero variance
// (up to 1e-12 relative to their mean) the p-value is 0 if their mean is
// nonzero and 1 otherwise.
PairedTTest paired_t_test(std::span<const double> a,
                          std::span<const double> b);

// Regularized incomplete beta I_x(a, b) by continued fraction.
double incomplete_beta(double a, double b, double x);

// P(|T| >= |t|) for Student's t with `dof` degrees of freedom.
double student_t_two_tailed(double t, double dof);

}  // namespace optinter::metrics

#endif  // OPTINTER_METRICS_TTEST_H_
