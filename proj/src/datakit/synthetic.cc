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

#include "optinter/datakit/synthetic.h"

#include <cmath>
#include <fstream>

#include "optinter/errors.h"
#include "optinter/numcore/ops.h"
#include "optinter/numcore/rng.h"

namespace optinter::datakit {

std::string_view to_string(PairKind kind) {
  switch (kind) {
    case PairKind::kMemorize:
      return "memorize";
    case PairKind::kFactorize:
      return "factorize";
    case PairKind::kNoise:
      return "noise";
  }
  return "noise";
}

PairKind parse_pair_kind(std::string_view text) {
  if (text == "memorize") return PairKind::kMemorize;
  if (text == "factorize") return PairKind::kFactorize;
  if (text == "noise" || text == "naive") return PairKind::kNoise;
  throw ConfigError("unknown pair kind '" + std::string(text) + "'");
}

void SyntheticSpec::validate() const {
  if (num_fields < 2) throw ConfigError("synthetic: need at least 2 fields");
  if (cardinalities.size() != num_fields) {
    throw ConfigError("synthetic: expected " + std::to_string(num_fields) +
                      " cardinalities, got " +
                      std::to_string(cardinalities.size()));
  }
  for (uint32_t c : cardinalities) {
    if (c == 0) throw DomainError("synthetic: cardinality must be positive");
  }
  if (latent_dim == 0) throw DomainError("synthetic: latent_dim must be >= 1");
  if (train_rows == 0) throw DomainError("synthetic: train_rows must be >= 1");
  if (!(main_effect_scale >= 0.0) || !(noise_level >= 0.0)) {
    throw DomainError("synthetic: scales must be non-negative");
  }
  std::vector<bool> seen(count_pairs(num_fields), false);
  for (const auto& p : pairs) {
    if (p.first == p.second || p.first >= num_fields ||
        p.second >= num_fields) {
      throw ConfigError("synthetic: invalid planted pair (" +
                        std::to_string(p.first) + "," +
                        std::to_string(p.second) + ")");
    }
    const size_t pos = pair_position(p.first, p.second, num_fields);
    if (seen[pos]) throw ConfigError("synthetic: pair planted twice");
    seen[pos] = true;
    if (!(p.strength >= 0.0)) {
      throw DomainError("synthetic: pair strength must be non-negative");
    }
  }
}

std::vector<PairKind> SyntheticSpec::pair_kinds() const {
  std::vector<PairKind> kinds(count_pairs(num_fields), PairKind::kNoise);
  for (const auto& p : pairs) {
    kinds[pair_position(p.first, p.second, num_fields)] = p.kind;
  }
  return kinds;
}

nlohmann::json SyntheticSpec::to_json() const {
  nlohmann::json planted = nlohmann::json::array();
  for (const auto& p : pairs) {
    planted.push_back({{"fields", {p.first, p.second}},
                       {"kind", std::string(to_string(p.kind))},
                       {"strength", p.strength}});
  }
  return {{"num_fields", num_fields},
          {"cardinalities", cardinalities},
          {"pairs", planted},
          {"main_effect_scale", main_effect_scale},
          {"noise_level", noise_level},
          {"bias", bias},
          {"latent_dim", latent_dim},
          {"rows",
           {{"train", train_rows},
            {"validation", validation_rows},
            {"test", test_rows}}},
          {"seed", seed},
          {"min_frequency", min_frequency}};
}

SyntheticSpec SyntheticSpec::from_json(const nlohmann::json& j) {
  SyntheticSpec spec;
  try {
    spec.num_fields = j.at("num_fields").get<uint32_t>();
    if (j.contains("cardinalities")) {
      spec.cardinalities = j.at("cardinalities").get<std::vector<uint32_t>>();
    } else {
      spec.cardinalities.assign(spec.num_fields,
                                j.at("cardinality").get<uint32_t>());
    }
    for (const auto& p : j.value("pairs", nlohmann::json::array())) {
      const auto fields = p.at("fields").get<std::vector<uint32_t>>();
      if (fields.size() != 2) throw ConfigError("synthetic: pair needs 2 fields");
      spec.pairs.push_back({fields[0], fields[1],
                            parse_pair_kind(p.at("kind").get<std::string>()),
                            p.value("strength", 1.0)});
    }
    spec.main_effect_scale = j.value("main_effect_scale", spec.main_effect_scale);
    spec.noise_level = j.value("noise_level", spec.noise_level);
    spec.bias = j.value("bias", spec.bias);
    spec.latent_dim = j.value("latent_dim", spec.latent_dim);
    if (j.contains("rows")) {
      const auto& rows = j.at("rows");
      spec.train_rows = rows.value("train", spec.train_rows);
      spec.validation_rows = rows.value("validation", spec.validation_rows);
      spec.test_rows = rows.value("test", spec.test_rows);
    }
    spec.seed = j.value("seed", spec.seed);
    spec.min_frequency = j.value("min_frequency", spec.min_frequency);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("synthetic spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

SyntheticSpec SyntheticSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open synthetic spec " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("synthetic spec " + path + ": " + e.what());
  }
  return from_json(j);
}

namespace {

// Per-pair logit term, materialized as a dense card_i x card_j table.
std::vector<double> pair_table(const SyntheticSpec& spec,
                               const PlantedPair& pair, numcore::Rng& rng) {
  const uint32_t ci = spec.cardinalities[pair.first];
  const uint32_t cj = spec.cardinalities[pair.second];
  std::vector<double> table(static_cast<size_t>(ci) * cj, 0.0);
  switch (pair.kind) {
    case PairKind::kNoise:
      break;
    case PairKind::kMemorize:
      for (double& v : table) v = pair.strength * rng.normal();
      break;
    case PairKind::kFactorize: {
      const uint32_t d = spec.latent_dim;
      const double scale = 1.0 / std::sqrt(static_cast<double>(d));
      std::vector<double> u(static_cast<size_t>(ci) * d);
      std::vector<double> w(static_cast<size_t>(cj) * d);
      for (double& v : u) v = rng.normal();
      for (double& v : w) v = rng.normal();
      for (uint32_t a = 0; a < ci; ++a) {
        for (uint32_t b = 0; b < cj; ++b) {
          double dot = 0.0;
          for (uint32_t k = 0; k < d; ++k) dot += u[a * d + k] * w[b * d + k];
          table[static_cast<size_t>(a) * cj + b] = pair.strength * scale * dot;
        }
      }
      break;
    }
  }
  return table;
}

RawTable draw_rows(const SyntheticSpec& spec, const FeatureSchema& schema,
                   const std::vector<std::vector<double>>& main_effects,
                   const std::vector<std::vector<double>>& tables,
                   size_t n, numcore::Rng& rng) {
  RawTable table;
  for (const auto& f : schema.fields) table.header.push_back(f.name);
  table.rows.reserve(n);
  std::vector<uint32_t> values(spec.num_fields);
  for (size_t r = 0; r < n; ++r) {
    double logit = spec.bias;
    RawRow row;
    row.values.reserve(spec.num_fields);
    for (uint32_t f = 0; f < spec.num_fields; ++f) {
      values[f] = static_cast<uint32_t>(rng.uniform_int(spec.cardinalities[f]));
      logit += main_effects[f][values[f]];
      row.values.push_back("v" + std::to_string(values[f]));
    }
    for (size_t k = 0; k < spec.pairs.size(); ++k) {
      const auto& p = spec.pairs[k];
      logit += tables[k][static_cast<size_t>(values[p.first]) *
                             spec.cardinalities[p.second] +
                         values[p.second]];
    }
    if (spec.noise_level > 0.0) logit += spec.noise_level * rng.normal();
    row.label = rng.uniform() < numcore::sigmoid(logit) ? 1 : 0;
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace

SyntheticTables generate_synthetic_tables(const SyntheticSpec& spec,
                                          uint64_t seed) {
  spec.validate();
  SyntheticTables out;
  for (uint32_t f = 0; f < spec.num_fields; ++f) {
    out.schema.fields.push_back({"f" + std::to_string(f + 1),
                                 FieldKind::kUnivalent});
  }
  out.ground_truth = spec.pair_kinds();

  numcore::Rng effects_rng = numcore::Rng(seed).fork(1);
  std::vector<std::vector<double>> main_effects(spec.num_fields);
  for (uint32_t f = 0; f < spec.num_fields; ++f) {
    main_effects[f].resize(spec.cardinalities[f]);
    for (double& v : main_effects[f]) {
      v = spec.main_effect_scale * effects_rng.normal();
    }
  }
  std::vector<std::vector<double>> tables;
  for (const auto& p : spec.pairs) {
    tables.push_back(pair_table(spec, p, effects_rng));
  }

  numcore::Rng train_rng = numcore::Rng(seed).fork(2);
  numcore::Rng val_rng = numcore::Rng(seed).fork(3);
  numcore::Rng test_rng = numcore::Rng(seed).fork(4);
  out.splits.train = draw_rows(spec, out.schema, main_effects, tables,
                               spec.train_rows, train_rng);
  out.splits.validation = draw_rows(spec, out.schema, main_effects, tables,
                                    spec.validation_rows, val_rng);
  out.splits.test = draw_rows(spec, out.schema, main_effects, tables,
                              spec.test_rows, test_rng);
  return out;
}

SyntheticDatasets generate_synthetic(const SyntheticSpec& spec, uint64_t seed) {
  SyntheticTables tables = generate_synthetic_tables(spec, seed);
  VocabularyOptions options;
  options.min_frequency = spec.min_frequency;
  auto vocab = std::make_shared<const Vocabulary>(
      Vocabulary::build(tables.splits.train, tables.schema, options));
  SyntheticDatasets out;
  out.vocabulary = vocab;
  out.train = encode_table(tables.splits.train, vocab, Split::kTrain);
  out.validation =
      encode_table(tables.splits.validation, vocab, Split::kValidation);
  out.test = encode_table(tables.splits.test, vocab, Split::kTest);
  out.ground_truth = std::move(tables.ground_truth);
  return out;
}

}  // namespace optinter::datakit
