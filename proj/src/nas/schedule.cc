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

#include "optinter/nas/schedule.h"

#include <algorithm>
#include <cmath>

#include "optinter/errors.h"

namespace optinter::nas {

void TemperatureSchedule::validate() const {
  if (!(tau_end > 0.0) || !(tau_start >= tau_end) || !std::isfinite(tau_start)) {
    throw ConfigError("temperature schedule needs tau_start >= tau_end > 0");
  }
}

double TemperatureSchedule::tau_at(size_t epoch, size_t total_epochs) const {
  if (total_epochs <= 1 || epoch == 0) return tau_start;
  const size_t last = total_epochs - 1;
  if (epoch >= last) return tau_end;
  const double frac = static_cast<double>(epoch) / static_cast<double>(last);
  const double tau = tau_start * std::pow(tau_end / tau_start, frac);
  return std::clamp(tau, tau_end, tau_start);
}

nlohmann::json TemperatureSchedule::to_json() const {
  return {{"tau_start", tau_start}, {"tau_end", tau_end}};
}

TemperatureSchedule TemperatureSchedule::from_json(const nlohmann::json& j) {
  TemperatureSchedule s;
  try {
    s.tau_start = j.value("tau_start", s.tau_start);
    s.tau_end = j.value("tau_end", s.tau_end);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("schedule: ") + e.what());
  }
  s.validate();
  return s;
}

}  // namespace optinter::nas
