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

#include "optinter/numcore/adam.h"

#include <cmath>

#include "optinter/errors.h"

namespace optinter::numcore {

Parameter::Parameter(std::string name_in, Tensor2 value_in)
    : name(std::move(name_in)),
      value(std::move(value_in)),
      grad(value.rows(), value.cols()),
      m(value.rows(), value.cols()),
      v(value.rows(), value.cols()) {}

void validate(const AdamConfig& cfg) {
  if (!(cfg.lr > 0.0) || !(cfg.eps > 0.0) || !(cfg.beta1 > 0.0) ||
      !(cfg.beta1 < 1.0) || !(cfg.beta2 > 0.0) || !(cfg.beta2 < 1.0) ||
      !(cfg.l2 >= 0.0)) {
    throw ConfigError("adam: hyperparameters out of range");
  }
}

namespace {

void check_grad(const Parameter& p, size_t begin, size_t end) {
  for (size_t i = begin; i < end; ++i) {
    if (!std::isfinite(p.grad[i])) {
      throw NumericError("adam: non-finite gradient in '" + p.name +
                         "' at flat index " + std::to_string(i));
    }
  }
}

struct StepScalars {
  double c1;
  double c2;
};

StepScalars advance(Parameter& p, const AdamConfig& cfg) {
  ++p.step;
  const double t = static_cast<double>(p.step);
  return {1.0 - std::pow(cfg.beta1, t), 1.0 - std::pow(cfg.beta2, t)};
}

void update_range(Parameter& p, const AdamConfig& cfg, const StepScalars& s,
                  size_t begin, size_t end) {
  for (size_t i = begin; i < end; ++i) {
    const double g = p.grad[i] + cfg.l2 * p.value[i];
    p.m[i] = cfg.beta1 * p.m[i] + (1.0 - cfg.beta1) * g;
    p.v[i] = cfg.beta2 * p.v[i] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = p.m[i] / s.c1;
    const double v_hat = p.v[i] / s.c2;
    p.value[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
    p.grad[i] = 0.0;
    if (!std::isfinite(p.value[i])) {
      throw NumericError("adam: non-finite value produced in '" + p.name +
                         "'");
    }
  }
}

}  // namespace

void adam_step(Parameter& p, const AdamConfig& cfg) {
  check_grad(p, 0, p.size());
  const StepScalars s = advance(p, cfg);
  update_range(p, cfg, s, 0, p.size());
}

void adam_step_rows(Parameter& p, std::span<const uint32_t> rows,
                    const AdamConfig& cfg) {
  const size_t cols = p.value.cols();
  for (uint32_t r : rows) {
    if (r >= p.value.rows()) {
      throw LookupError("adam_step_rows: row " + std::to_string(r) +
                        " out of range for '" + p.name + "'");
    }
    check_grad(p, r * cols, (r + 1) * cols);
  }
  const StepScalars s = advance(p, cfg);
  for (uint32_t r : rows) update_range(p, cfg, s, r * cols, (r + 1) * cols);
}

}  // namespace optinter::numcore
