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

#include "optinter/mianalysis/mutual_information.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <unordered_map>

#include "optinter/errors.h"

namespace optinter::mianalysis {

namespace {

void check_labels(std::span<const double> labels) {
  for (double y : labels) {
    if (y != 0.0 && y != 1.0) throw DomainError("mi: labels must be 0 or 1");
  }
}

}  // namespace

double label_entropy(std::span<const double> labels) {
  if (labels.empty()) throw DomainError("label entropy: empty input");
  check_labels(labels);
  double pos = 0.0;
  for (double y : labels) pos += y;
  const double n = static_cast<double>(labels.size());
  double h = 0.0;
  for (double c : {pos, n - pos}) {
    if (c > 0.0) h -= c / n * std::log(c / n);
  }
  return h;
}

double mutual_information(std::span<const uint32_t> values,
                          std::span<const double> labels) {
  if (values.empty()) throw DomainError("mi: empty input");
  if (values.size() != labels.size()) {
    throw DomainError("mi: values and labels differ in length");
  }
  check_labels(labels);
  std::unordered_map<uint32_t, std::array<uint64_t, 2>> joint;
  uint64_t class_count[2] = {0, 0};
  for (size_t i = 0; i < values.size(); ++i) {
    const int y = labels[i] == 1.0 ? 1 : 0;
    ++joint[values[i]][y];
    ++class_count[y];
  }
  // Visit cells in key order so the floating-point sum is reproducible.
  std::vector<std::pair<uint32_t, std::array<uint64_t, 2>>> cells(joint.begin(),
                                                                  joint.end());
  std::sort(cells.begin(), cells.end());
  const double n = static_cast<double>(values.size());
  // sum_{h,y} P(h,y) log(P(y|h) / P(y)); independent tables give exactly 0
  // because every ratio is then exactly 1.
  double mi = 0.0;
  for (const auto& [h, counts] : cells) {
    const double nh = static_cast<double>(counts[0] + counts[1]);
    for (int y = 0; y < 2; ++y) {
      if (counts[y] == 0) continue;
      const double c = static_cast<double>(counts[y]);
      mi += c / n *
            std::log((c * n) / (nh * static_cast<double>(class_count[y])));
    }
  }
  return std::max(mi, 0.0);
}

MiMatrix::MiMatrix(size_t num_fields, double label_entropy)
    : num_fields_(num_fields),
      label_entropy_(label_entropy),
      values_(num_fields * num_fields,
              std::numeric_limits<double>::quiet_NaN()) {}

void MiMatrix::set(size_t i, size_t j, double mi) {
  values_[i * num_fields_ + j] = mi;
  values_[j * num_fields_ + i] = mi;
}

std::vector<double> MiMatrix::pair_values() const {
  std::vector<double> out;
  for (size_t i = 0; i < num_fields_; ++i) {
    for (size_t j = i + 1; j < num_fields_; ++j) out.push_back(at(i, j));
  }
  return out;
}

double MiMatrix::max() const {
  const auto v = pair_values();
  if (v.empty()) throw DomainError("mi matrix: no pairs");
  return *std::max_element(v.begin(), v.end());
}

MiMatrix mi_matrix(const datakit::Dataset& data) {
  const std::vector<double> labels = data.labels();
  const size_t m = data.schema().num_fields();
  MiMatrix out(m, label_entropy(labels));
  const auto pairs = datakit::enumerate_pairs(m);
  std::vector<uint32_t> column(data.size());
  for (size_t p = 0; p < pairs.size(); ++p) {
    for (size_t r = 0; r < data.size(); ++r) column[r] = data[r].cross[p];
    out.set(pairs[p].first, pairs[p].second,
            mutual_information(column, labels));
  }
  return out;
}

std::array<std::optional<double>, model::kNumMethods> group_mean_mi(
    const MiMatrix& matrix, const model::ArchitectureDecision& decision) {
  if (decision.num_fields() != matrix.num_fields()) {
    throw ConfigError("group mean mi: decision has " +
                      std::to_string(decision.num_fields()) +
                      " fields, matrix has " +
                      std::to_string(matrix.num_fields()));
  }
  const auto values = matrix.pair_values();
  std::array<double, model::kNumMethods> sum{};
  std::array<size_t, model::kNumMethods> count{};
  for (size_t p = 0; p < values.size(); ++p) {
    const auto k = static_cast<size_t>(decision[p]);
    sum[k] += values[p];
    ++count[k];
  }
  std::array<std::optional<double>, model::kNumMethods> out;
  for (size_t k = 0; k < model::kNumMethods; ++k) {
    if (count[k] > 0) out[k] = sum[k] / static_cast<double>(count[k]);
  }
  return out;
}

nlohmann::ordered_json group_report(
    const MiMatrix& matrix, const model::ArchitectureDecision& decision) {
  const auto means = group_mean_mi(matrix, decision);
  const auto counts = decision.counts();
  nlohmann::ordered_json j;
  j["label_entropy"] = matrix.label_entropy();
  nlohmann::ordered_json groups = nlohmann::ordered_json::object();
  nlohmann::ordered_json sizes = nlohmann::ordered_json::object();
  for (size_t k = 0; k < model::kNumMethods; ++k) {
    const std::string name(model::to_string(model::kAllMethods[k]));
    if (means[k]) groups[name] = *means[k];
    sizes[name] = counts[k];
  }
  j["group_mean_mi"] = std::move(groups);
  j["pair_count"] = std::move(sizes);
  return j;
}

void export_heatmap(const MiMatrix& matrix,
                    const model::ArchitectureDecision* decision,
                    const std::string& path) {
  if (decision && decision->num_fields() != matrix.num_fields()) {
    throw ConfigError("heatmap: decision does not match matrix");
  }
  std::ofstream out(path);
  if (!out) throw FileError("cannot open '" + path + "' for writing");
  out << (decision ? "row,col,mi,method\n" : "row,col,mi\n");
  size_t p = 0;
  char buf[64];
  for (size_t i = 0; i < matrix.num_fields(); ++i) {
    for (size_t j = i + 1; j < matrix.num_fields(); ++j, ++p) {
      std::snprintf(buf, sizeof(buf), "%.17g", matrix.at(i, j));
      out << i + 1 << ',' << j + 1 << ',' << buf;
      if (decision) out << ',' << model::to_string((*decision)[p]);
      out << '\n';
    }
  }
  if (!out) throw FileError("write to '" + path + "' failed");
}

}  // namespace optinter::mianalysis
