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

// optinter: command-line driver for data generation, preparation, search,
// retraining, evaluation, MI analysis and run comparison.
//
// Exit codes: 0 success, 1 other failure, 2 config error, 3 data format
// error, 4 numeric divergence.

#include <iostream>
#include <map>
#include <sstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "optinter/cli/commands.h"
#include "optinter/cli/run_config.h"
#include "optinter/errors.h"
#include "optinter/hash.h"

namespace {

using optinter::cli::RunConfig;

constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitFormat = 3;
constexpr int kExitNumeric = 4;

// Hyper-parameter flags that override keys of the JSON config.
struct Overrides {
  std::optional<uint64_t> seed;
  std::optional<std::string> strategy;
  std::map<std::string, double> numbers;
  std::map<std::string, size_t> sizes;
  std::optional<std::string> net;
  std::optional<bool> layer_norm;
  std::optional<bool> gumbel;

  void attach(CLI::App* app) {
    app->add_option("--seed", seed, "Seed for model init, batches and noise");
    app->add_option("--strategy", strategy, "joint, bilevel or random")
        ->check(CLI::IsMember({"joint", "bilevel", "random"}));
    for (const char* key :
         {"lr_o", "lr_c", "lr_a", "l2_o", "l2_c", "tau_start", "tau_end"}) {
      app->add_option_function<double>(
          std::string("--") + key,
          [this, key](double v) { numbers[key] = v; }, key);
    }
    for (const char* key : {"bs", "epochs", "patience", "s1", "s2"}) {
      app->add_option_function<size_t>(
          std::string("--") + key,
          [this, key](size_t v) { sizes[key] = v; }, key);
    }
    app->add_option("--net", net, "Hidden widths, e.g. 64,32 (empty: none)");
    app->add_option("--LN", layer_norm, "Layer normalization (true/false)");
    app->add_option("--gumbel", gumbel, "Gumbel noise during search");
  }

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    if (seed) j["seed"] = *seed;
    if (strategy) j["strategy"] = *strategy;
    for (const auto& [k, v] : numbers) j[k] = v;
    for (const auto& [k, v] : sizes) j[k] = v;
    if (net) {
      std::vector<uint32_t> widths;
      std::stringstream ss(*net);
      for (std::string part; std::getline(ss, part, ',');) {
        if (part.empty()) continue;
        try {
          widths.push_back(static_cast<uint32_t>(std::stoul(part)));
        } catch (const std::exception&) {
          throw optinter::ConfigError("--net: bad width '" + part + "'");
        }
      }
      j["net"] = widths;
    }
    if (layer_norm) j["LN"] = *layer_norm;
    if (gumbel) j["gumbel_on"] = *gumbel;
    return j;
  }
};

RunConfig resolve(const std::string& path, const Overrides& o) {
  return RunConfig::from_json(
      optinter::cli::load_config_json(path, o.to_json()));
}

std::string run_key(const RunConfig& c, const std::string& extra) {
  optinter::Fnv1a64 h;
  h.update(c.to_json().dump());
  h.update(extra);
  return h.hex();
}

int run(int argc, char** argv) {
  CLI::App app{"OptInter: per-pair interaction search for CTR models"};
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic dataset");
  std::string spec_path, gen_out;
  std::optional<uint64_t> gen_seed;
  gen->add_option("spec", spec_path, "Synthetic spec JSON")->required();
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--seed", gen_seed, "Overrides the spec's seed");

  // prepare
  auto* prep = app.add_subcommand("prepare", "Build vocabulary and encode");
  optinter::cli::PrepareArgs pa;
  std::vector<double> fractions;
  prep->add_option("csv", pa.csv_paths,
                   "One CSV to split, or train, validation and test CSVs")
      ->required();
  prep->add_option("--schema", pa.schema_path, "Schema JSON")->required();
  prep->add_option("--min-frequency", pa.vocabulary.min_frequency,
                   "Rarer values map to OOV");
  prep->add_option("--buckets", pa.vocabulary.continuous_buckets,
                   "Buckets for continuous fields in cross products");
  prep->add_option("--hash-buckets", pa.vocabulary.cross_hash_buckets,
                   "Hash cross-product values (0: exact)");
  prep->add_option("--split", fractions, "train,validation,test fractions")
      ->delimiter(',')
      ->expected(3);
  prep->add_option("--split-seed", pa.split_seed, "Seed of the split");
  prep->add_option("--out", pa.out_dir, "Output directory")->required();

  // search
  auto* search = app.add_subcommand("search", "Search an architecture");
  std::string search_config, search_data, search_out;
  Overrides search_over;
  search->add_option("--config", search_config, "Run config JSON");
  search->add_option("--data", search_data, "Prepared data directory")
      ->required();
  search->add_option("--out", search_out, "Run directory");
  search_over.attach(search);

  // retrain
  auto* retrain = app.add_subcommand("retrain", "Train a fixed architecture");
  std::string retrain_config, retrain_data, retrain_out, arch = "search",
                                                          search_dir;
  Overrides retrain_over;
  retrain->add_option("--config", retrain_config, "Run config JSON");
  retrain->add_option("--data", retrain_data, "Prepared data directory")
      ->required();
  retrain->add_option("--out", retrain_out, "Run directory");
  retrain->add_option("--arch", arch,
                      "search, all-memorize, all-factorize, all-naive or "
                      "file:<path>");
  retrain->add_option("--from", search_dir,
                      "Search run to take the decision from (--arch search)");
  retrain_over.attach(retrain);

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  std::string ckpt, eval_data, eval_split = "test";
  eval->add_option("checkpoint", ckpt, "Checkpoint file")->required();
  eval->add_option("--data", eval_data, "Prepared data directory")->required();
  eval->add_option("--split", eval_split, "train, validation or test")
      ->check(CLI::IsMember({"train", "validation", "test"}));

  // analyze-mi
  auto* mi = app.add_subcommand("analyze-mi", "Pairwise mutual information");
  std::string mi_data, mi_decision, mi_split = "train", mi_out;
  mi->add_option("--data", mi_data, "Prepared data directory")->required();
  mi->add_option("--decision", mi_decision, "Decision JSON for group means");
  mi->add_option("--split", mi_split, "train, validation, test or all")
      ->check(CLI::IsMember({"train", "validation", "test", "all"}));
  mi->add_option("--out", mi_out, "Output directory")->required();

  // compare
  auto* cmp = app.add_subcommand("compare", "Paired t-test between runs");
  std::vector<std::string> baseline, candidate;
  cmp->add_option("--baseline", baseline, "Baseline retrain runs")->required();
  cmp->add_option("--candidate", candidate, "Candidate retrain runs, paired")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  using optinter::cli::resolve_run_dir;
  if (*gen) {
    const std::string out = resolve_run_dir(gen_out, "gen-data", "");
    optinter::cli::cmd_gen_data(spec_path, out, gen_seed);
    std::cout << "wrote " << out << '\n';
  } else if (*prep) {
    if (!fractions.empty()) {
      pa.fractions = {fractions[0], fractions[1], fractions[2]};
    }
    pa.out_dir = resolve_run_dir(pa.out_dir, "prepare", "");
    optinter::cli::cmd_prepare(pa);
    std::cout << "wrote " << pa.out_dir << '\n';
  } else if (*search) {
    const RunConfig config = resolve(search_config, search_over);
    const std::string out =
        resolve_run_dir(search_out, "search", run_key(config, search_data));
    const auto decision = optinter::cli::cmd_search(config, search_data, out);
    const auto counts = decision.counts();
    std::cout << "decision memorize=" << counts[0]
              << " factorize=" << counts[1] << " naive=" << counts[2] << '\n'
              << "wrote " << out << '\n';
  } else if (*retrain) {
    const RunConfig config = resolve(retrain_config, retrain_over);
    const std::string out = resolve_run_dir(
        retrain_out, "retrain", run_key(config, retrain_data + arch));
    const auto report = optinter::cli::cmd_retrain(config, arch, retrain_data,
                                                   out, search_dir);
    std::cout << report.summary() << '\n' << "wrote " << out << '\n';
  } else if (*eval) {
    const auto report = optinter::cli::cmd_eval(
        ckpt, eval_data, optinter::datakit::parse_split(eval_split));
    std::cout << report.summary() << '\n' << report.to_json().dump() << '\n';
  } else if (*mi) {
    const std::string out = resolve_run_dir(mi_out, "analyze-mi", "");
    const auto report =
        optinter::cli::cmd_analyze_mi(mi_data, mi_decision, mi_split, out);
    std::cout << report.dump(2) << '\n' << "wrote " << out << '\n';
  } else if (*cmp) {
    std::cout << optinter::cli::cmd_compare(baseline, candidate).dump(2)
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const optinter::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const optinter::FormatError& e) {
    std::cerr << "data format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const optinter::CompatibilityError& e) {
    std::cerr << "data format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const optinter::LookupError& e) {
    std::cerr << "data format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const optinter::NumericError& e) {
    std::cerr << "numeric divergence: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
}
