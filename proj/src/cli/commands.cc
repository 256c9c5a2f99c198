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

#include "optinter/cli/commands.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "optinter/datakit/csv.h"
#include "optinter/datakit/synthetic.h"
#include "optinter/errors.h"
#include "optinter/hash.h"
#include "optinter/metrics/ttest.h"
#include "optinter/mianalysis/mutual_information.h"
#include "optinter/model/checkpoint.h"
#include "optinter/model/optinter_model.h"
#include "optinter/nas/search.h"

namespace optinter::cli {

namespace fs = std::filesystem;
using datakit::Dataset;
using datakit::Split;
using model::ArchitectureDecision;
using model::Method;

namespace {

constexpr char kVocabularyFile[] = "vocabulary.txt";
constexpr char kDecisionFile[] = "decision.json";
constexpr char kEvalFile[] = "eval.json";

std::string join(const fs::path& dir, const std::string& name) {
  return (dir / name).string();
}

void make_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw FileError("cannot create directory '" + dir + "'");
}

template <typename Json>
void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw FileError("write failed for '" + path + "'");
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("'" + path + "': " + e.what());
  }
}

std::string text_hash(const std::string& text) {
  Fnv1a64 h;
  h.update(text);
  return h.hex();
}

// manifest.json: what ran, on which inputs, and hashes of what it wrote.
void write_manifest(const std::string& dir, const std::string& command,
                    std::optional<uint64_t> seed,
                    const std::string& config_text,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  nlohmann::ordered_json m;
  m["command"] = command;
  m["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json();
  m["config_hash"] = text_hash(config_text);
  Fnv1a64 combined;
  nlohmann::ordered_json in = nlohmann::ordered_json::array();
  for (const auto& path : inputs) {
    const std::string h = file_hash(path);
    combined.update(h);
    in.push_back({{"path", path}, {"hash", h}});
  }
  m["inputs"] = in;
  m["input_hash"] = combined.hex();
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& name : outputs) {
    out.push_back({{"file", name}, {"hash", file_hash(join(dir, name))}});
  }
  m["outputs"] = out;
  write_json(join(dir, "manifest.json"), m);
}

std::string split_file(Split s) {
  return std::string(datakit::to_string(s)) + ".tsv";
}

Method method_for(datakit::PairKind kind) {
  switch (kind) {
    case datakit::PairKind::kMemorize:
      return Method::kMemorize;
    case datakit::PairKind::kFactorize:
      return Method::kFactorize;
    case datakit::PairKind::kNoise:
      return Method::kNaive;
  }
  return Method::kNaive;
}

}  // namespace

std::string resolve_run_dir(const std::string& out, const std::string& command,
                            const std::string& key) {
  fs::path p = out.empty() ? fs::path(command + "-" + key.substr(0, 12))
                           : fs::path(out);
  if (p.is_absolute()) return p.string();
  if (const char* root = std::getenv(kRunRootEnv); root && *root) {
    return (fs::path(root) / p).string();
  }
  return p.string();
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open '" + path + "'");
  Fnv1a64 h;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    h.update(std::string_view(buf, static_cast<size_t>(in.gcount())));
  }
  return h.hex();
}

const Dataset& PreparedData::split(Split s) const {
  switch (s) {
    case Split::kTrain:
      return train;
    case Split::kValidation:
      return validation;
    case Split::kTest:
      return test;
  }
  return train;
}

PreparedData load_prepared(const std::string& data_dir) {
  PreparedData d;
  const std::string vocab_path = join(data_dir, kVocabularyFile);
  d.vocabulary = std::make_shared<const datakit::Vocabulary>(
      datakit::Vocabulary::load(vocab_path));
  d.files.push_back(vocab_path);
  for (Split s : {Split::kTrain, Split::kValidation, Split::kTest}) {
    const std::string path = join(data_dir, split_file(s));
    Dataset ds = datakit::read_encoded(path, d.vocabulary);
    d.files.push_back(path);
    if (s == Split::kTrain) d.train = std::move(ds);
    if (s == Split::kValidation) d.validation = std::move(ds);
    if (s == Split::kTest) d.test = std::move(ds);
  }
  return d;
}

void cmd_gen_data(const std::string& spec_path, const std::string& out_dir,
                  std::optional<uint64_t> seed) {
  datakit::SyntheticSpec spec = datakit::SyntheticSpec::load(spec_path);
  if (seed) spec.seed = *seed;
  spec.validate();
  const auto tables = datakit::generate_synthetic_tables(spec, spec.seed);
  make_dir(out_dir);
  const fs::path dir(out_dir);
  datakit::write_csv(join(dir, "train.csv"), tables.splits.train);
  datakit::write_csv(join(dir, "validation.csv"), tables.splits.validation);
  datakit::write_csv(join(dir, "test.csv"), tables.splits.test);
  tables.schema.save(join(dir, "schema.json"));
  write_json(join(dir, "spec.json"), spec.to_json());
  std::vector<Method> truth;
  for (auto kind : tables.ground_truth) truth.push_back(method_for(kind));
  ArchitectureDecision(spec.num_fields, truth).save(join(dir, "ground_truth.json"));
  write_manifest(out_dir, "gen-data", spec.seed, spec.to_json().dump(),
                 {spec_path},
                 {"train.csv", "validation.csv", "test.csv", "schema.json",
                  "spec.json", "ground_truth.json"});
}

void cmd_prepare(const PrepareArgs& args) {
  if (args.csv_paths.size() != 1 && args.csv_paths.size() != 3) {
    throw ConfigError("prepare: expected 1 or 3 CSV files, got " +
                      std::to_string(args.csv_paths.size()));
  }
  if (args.vocabulary.min_frequency < 1) {
    throw ConfigError("prepare: min frequency must be >= 1");
  }
  const auto schema = datakit::FeatureSchema::load(args.schema_path);
  schema.validate();
  datakit::RawSplits raw;
  if (args.csv_paths.size() == 1) {
    const auto table = datakit::read_csv(args.csv_paths[0]);
    datakit::check_header(table, schema);
    raw = datakit::split_table(table, args.fractions, args.split_seed);
  } else {
    raw.train = datakit::read_csv(args.csv_paths[0]);
    raw.validation = datakit::read_csv(args.csv_paths[1]);
    raw.test = datakit::read_csv(args.csv_paths[2]);
  }
  for (const auto* t : {&raw.train, &raw.validation, &raw.test}) {
    datakit::check_header(*t, schema);
  }
  auto vocab = std::make_shared<const datakit::Vocabulary>(
      datakit::Vocabulary::build(raw.train, schema, args.vocabulary));
  make_dir(args.out_dir);
  const fs::path dir(args.out_dir);
  vocab->save(join(dir, kVocabularyFile));
  schema.save(join(dir, "schema.json"));
  const std::pair<Split, const datakit::RawTable*> parts[] = {
      {Split::kTrain, &raw.train},
      {Split::kValidation, &raw.validation},
      {Split::kTest, &raw.test}};
  for (const auto& [s, table] : parts) {
    datakit::write_encoded(join(dir, split_file(s)),
                           datakit::encode_table(*table, vocab, s));
  }
  nlohmann::ordered_json settings;
  settings["min_frequency"] = args.vocabulary.min_frequency;
  settings["continuous_buckets"] = args.vocabulary.continuous_buckets;
  settings["cross_hash_buckets"] = args.vocabulary.cross_hash_buckets;
  settings["fractions"] = args.fractions;
  settings["rows"] = {raw.train.rows.size(), raw.validation.rows.size(),
                      raw.test.rows.size()};
  std::vector<std::string> inputs = args.csv_paths;
  inputs.push_back(args.schema_path);
  write_manifest(args.out_dir, "prepare",
                 args.csv_paths.size() == 1 ? std::optional(args.split_seed)
                                            : std::nullopt,
                 settings.dump(), inputs,
                 {kVocabularyFile, "schema.json", "train.tsv",
                  "validation.tsv", "test.tsv"});
}

ArchitectureDecision cmd_search(const RunConfig& config,
                                const std::string& data_dir,
                                const std::string& out_dir) {
  const PreparedData data = load_prepared(data_dir);
  const auto dims = model::ModelDims::from_vocabulary(*data.vocabulary);
  make_dir(out_dir);
  const fs::path dir(out_dir);
  const auto config_json = config.to_json();
  write_json(join(dir, "config.json"), config_json);

  std::vector<std::string> outputs = {"config.json", kDecisionFile,
                                      "search_log.ndjson"};
  ArchitectureDecision decision;
  nas::RunLog trace;
  if (config.strategy == nas::SearchStrategy::kRandom) {
    numcore::Rng rng(config.seed);
    decision = nas::random_architecture(dims.num_fields(), rng);
  } else {
    model::OptInterModel m(config.model, dims);
    nas::SearchOptions options{config.schedule, config.gumbel_on};
    const auto result =
        config.strategy == nas::SearchStrategy::kJoint
            ? nas::search(data.train, data.validation, m, options,
                          config.search_loop)
            : nas::bilevel_search(data.train, data.validation, m, options,
                                  config.search_loop);
    decision = result.decision;
    trace = result.trace;
    nlohmann::ordered_json alpha;
    alpha["log_alpha"] = nlohmann::ordered_json::array();
    alpha["alpha"] = nlohmann::ordered_json::array();
    const auto probs = m.alpha();
    for (size_t p = 0; p < result.log_alpha.rows(); ++p) {
      const auto row = result.log_alpha.row(p);
      const auto prow = probs.row(p);
      alpha["log_alpha"].push_back(std::vector<double>(row.begin(), row.end()));
      alpha["alpha"].push_back(std::vector<double>(prow.begin(), prow.end()));
    }
    alpha["epochs_run"] = result.epochs_run;
    alpha["final_tau"] = result.final_tau;
    write_json(join(dir, "alpha.json"), alpha);
    model::save_checkpoint(m, data.vocabulary->schema().hash(),
                           result.final_tau, join(dir, "search.ckpt"));
    outputs.push_back("alpha.json");
    outputs.push_back("search.ckpt");
  }
  decision.save(join(dir, kDecisionFile));
  trace.write(join(dir, "search_log.ndjson"));
  write_manifest(out_dir, "search", config.seed, config_json.dump(),
                 data.files, outputs);
  return decision;
}

ArchitectureDecision resolve_architecture(const std::string& arch,
                                          const RunConfig& config,
                                          const std::string& data_dir,
                                          const std::string& out_dir,
                                          const std::string& search_dir,
                                          size_t num_fields) {
  if (arch == "all-memorize") {
    return ArchitectureDecision::uniform(num_fields, Method::kMemorize);
  }
  if (arch == "all-factorize") {
    return ArchitectureDecision::uniform(num_fields, Method::kFactorize);
  }
  if (arch == "all-naive") {
    return ArchitectureDecision::uniform(num_fields, Method::kNaive);
  }
  if (arch.starts_with("file:")) {
    return ArchitectureDecision::load(arch.substr(5));
  }
  if (arch == "search") {
    if (!search_dir.empty()) {
      return ArchitectureDecision::load(join(search_dir, kDecisionFile));
    }
    return cmd_search(config, data_dir, join(out_dir, "search"));
  }
  throw ConfigError("unknown --arch '" + arch +
                    "' (search, all-memorize, all-factorize, all-naive, "
                    "file:<path>)");
}

metrics::EvalReport cmd_retrain(const RunConfig& config, const std::string& arch,
                                const std::string& data_dir,
                                const std::string& out_dir,
                                const std::string& search_dir) {
  const PreparedData data = load_prepared(data_dir);
  const auto dims = model::ModelDims::from_vocabulary(*data.vocabulary);
  make_dir(out_dir);
  const ArchitectureDecision decision = resolve_architecture(
      arch, config, data_dir, out_dir, search_dir, dims.num_fields());
  if (decision.num_fields() != dims.num_fields()) {
    throw CompatibilityError("decision has " +
                             std::to_string(decision.num_fields()) +
                             " fields, data has " +
                             std::to_string(dims.num_fields()));
  }
  const fs::path dir(out_dir);
  const auto config_json = config.to_json();
  write_json(join(dir, "config.json"), config_json);
  decision.save(join(dir, kDecisionFile));

  auto result =
      nas::retrain(data.train, data.validation,
                   model::OptInterModel(config.model, dims, decision),
                   config.retrain_loop);
  result.trace.write(join(dir, "retrain_log.ndjson"));
  model::save_checkpoint(result.model, data.vocabulary->schema().hash(), 1.0,
                         join(dir, "model.ckpt"));
  nlohmann::ordered_json eval;
  eval["arch"] = arch.starts_with("file:") ? "file" : arch;
  eval["counts"] = decision.counts();
  eval["best_epoch"] = result.best_epoch;
  eval["validation"] = nas::evaluate_model(result.model, data.validation).to_json();
  const auto test = nas::evaluate_model(result.model, data.test);
  eval["test"] = test.to_json();
  write_json(join(dir, kEvalFile), eval);

  std::vector<std::string> inputs = data.files;
  if (arch.starts_with("file:")) inputs.push_back(arch.substr(5));
  if (arch == "search" && !search_dir.empty()) {
    inputs.push_back(join(search_dir, kDecisionFile));
  }
  write_manifest(out_dir, "retrain", config.seed, config_json.dump(), inputs,
                 {"config.json", kDecisionFile, "retrain_log.ndjson",
                  "model.ckpt", kEvalFile});
  return test;
}

metrics::EvalReport cmd_eval(const std::string& checkpoint,
                             const std::string& data_dir, Split split) {
  const PreparedData data = load_prepared(data_dir);
  const auto loaded =
      model::load_checkpoint(checkpoint, data.vocabulary->schema().hash());
  if (!(loaded.model.dims() ==
        model::ModelDims::from_vocabulary(*data.vocabulary))) {
    throw CompatibilityError("checkpoint dimensions do not match '" +
                             data_dir + "'");
  }
  model::ForwardOptions options;
  options.tau = loaded.tau;
  return nas::evaluate_model(loaded.model, data.split(split), options);
}

nlohmann::ordered_json cmd_analyze_mi(const std::string& data_dir,
                                      const std::string& decision_path,
                                      const std::string& split,
                                      const std::string& out_dir) {
  const PreparedData data = load_prepared(data_dir);
  Dataset source;
  if (split == "all") {
    std::vector<datakit::EncodedInstance> rows;
    for (const Dataset* d : {&data.train, &data.validation, &data.test}) {
      rows.insert(rows.end(), d->instances().begin(), d->instances().end());
    }
    source = Dataset(data.vocabulary, Split::kTrain, std::move(rows));
  } else {
    source = data.split(datakit::parse_split(split));
  }
  const auto matrix = mianalysis::mi_matrix(source);
  std::optional<ArchitectureDecision> decision;
  if (!decision_path.empty()) {
    decision = ArchitectureDecision::load(decision_path);
    if (decision->num_fields() != matrix.num_fields()) {
      throw CompatibilityError("decision does not match the data's fields");
    }
  }
  make_dir(out_dir);
  const fs::path dir(out_dir);
  mianalysis::export_heatmap(matrix, decision ? &*decision : nullptr,
                             join(dir, "mi_heatmap.csv"));
  nlohmann::ordered_json report;
  report["split"] = split;
  report["n_instances"] = source.size();
  if (decision) {
    const auto groups = mianalysis::group_report(matrix, *decision);
    for (const auto& [k, v] : groups.items()) report[k] = v;
  } else {
    report["label_entropy"] = matrix.label_entropy();
  }
  report["max_mi"] = matrix.max();
  write_json(join(dir, "mi_groups.json"), report);
  std::vector<std::string> inputs = data.files;
  if (decision) inputs.push_back(decision_path);
  write_manifest(out_dir, "analyze-mi", std::nullopt, split, inputs,
                 {"mi_heatmap.csv", "mi_groups.json"});
  return report;
}

nlohmann::ordered_json cmd_compare(const std::vector<std::string>& baseline,
                                   const std::vector<std::string>& candidate) {
  if (baseline.size() != candidate.size() || baseline.size() < 2) {
    throw ConfigError(
        "compare: need two equally long run lists with at least 2 runs each");
  }
  auto load = [](const std::vector<std::string>& dirs) {
    std::vector<metrics::EvalReport> out;
    for (const auto& d : dirs) {
      out.push_back(metrics::EvalReport::from_json(
          read_json(join(d, kEvalFile)).at("test")));
    }
    return out;
  };
  const auto a = load(baseline);
  const auto b = load(candidate);
  nlohmann::ordered_json table;
  table["n"] = a.size();
  for (const char* metric : {"auc", "logloss"}) {
    std::vector<double> va, vb;
    for (size_t k = 0; k < a.size(); ++k) {
      const bool is_auc = std::string_view(metric) == "auc";
      va.push_back(is_auc ? a[k].auc : a[k].logloss);
      vb.push_back(is_auc ? b[k].auc : b[k].logloss);
    }
    double mean_a = 0.0, mean_b = 0.0;
    for (size_t k = 0; k < va.size(); ++k) {
      mean_a += va[k] / static_cast<double>(va.size());
      mean_b += vb[k] / static_cast<double>(vb.size());
    }
    // Candidate minus baseline.
    const auto t = metrics::paired_t_test(vb, va);
    nlohmann::ordered_json row;
    row["baseline_mean"] = mean_a;
    row["candidate_mean"] = mean_b;
    row["mean_diff"] = t.mean_diff;
    row["t"] = t.t;
    row["dof"] = t.dof;
    row["p_value"] = t.p_value;
    table[metric] = row;
  }
  return table;
}

}  // namespace optinter::cli
