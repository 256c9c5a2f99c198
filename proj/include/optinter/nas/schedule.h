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

#ifndef OPTINTER_NAS_SCHEDULE_H_
#define OPTINTER_NAS_SCHEDULE_H_

#include <cstddef>

#include "json.hpp"

namespace optinter::nas {

// Exponential per-epoch decay from tau_start at epoch 0 to tau_end at the
// last epoch of the budget.
struct TemperatureSchedule {
  double tau_start = 1.0;
  double tau_end = 0.1;

  // Throws ConfigError unless tau_start >= tau_end > 0.
  void validate() const;
  double tau_at(size_t epoch, size_t total_epochs) const;

  nlohmann::json to_json() const;
  static TemperatureSchedule from_json(const nlohmann::json& j);

  friend bool operator==(const TemperatureSchedule&,
                         const TemperatureSchedule&) = default;
};

}  // namespace optinter::nas

#endif  // OPTINTER_NAS_SCHEDULE_H_
