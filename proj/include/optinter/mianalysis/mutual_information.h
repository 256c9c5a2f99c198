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

#ifndef OPTINTER_MIANALYSIS_MUTUAL_INFORMATION_H_
#define OPTINTER_MIANALYSIS_MUTUAL_INFORMATION_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "optinter/datakit/dataset.h"
#include "optinter/model/architecture.h"

namespace optinter::mianalysis {

// Plug-in estimate of I(H; y) in nats from per-instance cross-feature
// indices and binary labels. Throws DomainError on empty or mismatched
// input and on non-binary labels.
double mutual_information(std::span<const uint32_t> values,
                          std::span<const double> labels);

// Empirical entropy of binary labels, nats.
double label_entropy(std::span<const double> labels);

// Symmetric M x M grid of pair/label MI; the diagonal is NaN.
class MiMatrix {
 public:
  MiMatrix() = default;
  MiMatrix(size_t num_fields, double label_entropy);

  size_t num_fields() const { return num_fields_; }
  double label_entropy() const { return label_entropy_; }
  double at(size_t i, size_t j) const { return values_[i * num_fields_ + j]; }
  void set(size_t i, size_t j, double mi);
  // Entries in canonical pair order.
  std::vector<double> pair_values() const;
  double max() const;

 private:
  size_t num_fields_ = 0;
  double label_entropy_ = 0.0;
  std::vector<double> values_;
};

MiMatrix mi_matrix(const datakit::Dataset& data);

// Mean MI per method in (memorize, factorize, naive) order; groups with no
// pairs are nullopt. Throws ConfigError if the decision does not cover the
// matrix.
std::array<std::optional<double>, model::kNumMethods> group_mean_mi(
    const MiMatrix& matrix, const model::ArchitectureDecision& decision);

// {"label_entropy":..., "group_mean_mi":{"memorize":...,...},
//  "pair_count":{...}}; absent groups are omitted.
nlohmann::ordered_json group_report(const MiMatrix& matrix,
                                    const model::ArchitectureDecision& decision);

// CSV "row,col,mi[,method]" with 1-based field numbers, one line per pair.
// Throws FileError on I/O failure.
void export_heatmap(const MiMatrix& matrix,
                    const model::ArchitectureDecision* decision,
                    const std::string& path);

}  // namespace optinter::mianalysis

#endif  // OPTINTER_MIANALYSIS_MUTUAL_INFORMATION_H_
