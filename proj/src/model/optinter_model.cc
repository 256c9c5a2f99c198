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

#include "optinter/model/optinter_model.h"

#include <algorithm>
#include <cmath>

#include "optinter/errors.h"

namespace optinter::model {

ModelDims ModelDims::from_vocabulary(const datakit::Vocabulary& vocabulary) {
  return {vocabulary.field_sizes(), vocabulary.pair_sizes()};
}

nlohmann::json ModelDims::to_json() const {
  return {{"field_sizes", field_sizes}, {"pair_sizes", pair_sizes}};
}

ModelDims ModelDims::from_json(const nlohmann::json& j) {
  try {
    return {j.at("field_sizes").get<std::vector<uint32_t>>(),
            j.at("pair_sizes").get<std::vector<uint32_t>>()};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("model dims: ") + e.what());
  }
}

EmbeddingTable::EmbeddingTable(std::string name, Tensor2 value)
    : table(std::move(name), std::move(value)),
      touched_mark(table.value.rows(), 0) {}

void EmbeddingTable::clear_touched() {
  for (uint32_t r : touched) touched_mark[r] = 0;
  touched.clear();
}

namespace {

Tensor2 init_table(size_t rows, size_t dim, double scale, numcore::Rng rng) {
  const double bound = scale > 0.0 ? scale : numcore::xavier_bound(rows, dim);
  Tensor2 t(rows, dim);
  for (double& v : t.values()) v = rng.uniform(-bound, bound);
  return t;
}

}  // namespace

OptInterModel::OptInterModel(ModelConfig config, ModelDims dims,
                             std::optional<ArchitectureDecision> decision)
    : config_(std::move(config)),
      dims_(std::move(dims)),
      decision_(std::move(decision)) {
  config_.validate();
  const size_t m = dims_.num_fields();
  if (m < 2) throw ConfigError("model: need at least 2 fields");
  layout_ = CombinationLayout::make(m, config_.s1, config_.s2);
  if (dims_.num_pairs() != layout_.num_pairs()) {
    throw ConfigError("model: pair vocabulary count does not match fields");
  }
  for (uint32_t s : dims_.field_sizes) {
    if (s == 0) throw ConfigError("model: empty field vocabulary");
  }
  if (decision_) fixed_width(*decision_, layout_);

  const numcore::Rng root(config_.seed);
  for (size_t f = 0; f < m; ++f) {
    original_.emplace_back(
        "E_o." + std::to_string(f),
        init_table(dims_.field_sizes[f], config_.s1, config_.embedding_init,
                   root.fork(1000 + f)));
  }
  cross_.resize(layout_.num_pairs());
  for (size_t p = 0; p < layout_.num_pairs(); ++p) {
    if (!has_cross_table(p)) continue;
    cross_[p] = EmbeddingTable(
        "E_m." + std::to_string(p),
        init_table(dims_.pair_sizes[p], config_.s2, config_.embedding_init,
                   root.fork(1000000 + p)));
  }
  size_t width = m * config_.s1;
  if (relaxed()) {
    arch_ = Parameter("log_alpha", Tensor2(layout_.num_pairs(), kNumMethods));
    width += layout_.num_pairs() * layout_.padded_width();
  } else {
    width += fixed_width(*decision_, layout_);
  }
  numcore::Rng mlp_rng = root.fork(1);
  mlp_ = Mlp(width, config_.mlp_layers, config_.layer_norm, config_.ln_eps,
             mlp_rng);
}

bool OptInterModel::has_cross_table(size_t pair) const {
  return relaxed() || (*decision_)[pair] == Method::kMemorize;
}

Tensor2 OptInterModel::embed_original(
    std::span<const EncodedInstance* const> batch) const {
  const size_t m = dims_.num_fields();
  const size_t s1 = config_.s1;
  Tensor2 eo(batch.size(), m * s1);
  for (size_t r = 0; r < batch.size(); ++r) {
    const EncodedInstance& inst = *batch[r];
    if (inst.original.size() != m) {
      throw ShapeError("instance has " + std::to_string(inst.original.size()) +
                       " fields, model expects " + std::to_string(m));
    }
    double* out = eo.row(r).data();
    for (size_t f = 0; f < m; ++f) {
      const auto& fv = inst.original[f];
      const Tensor2& table = original_[f].table.value;
      if (fv.indices.empty()) continue;
      const double w = fv.scalar / static_cast<double>(fv.indices.size());
      for (uint32_t idx : fv.indices) {
        if (idx >= table.rows()) {
          throw LookupError("field " + std::to_string(f) + ": index " +
                            std::to_string(idx) + " >= vocabulary size " +
                            std::to_string(table.rows()));
        }
        const double* row = table.row(idx).data();
        for (size_t t = 0; t < s1; ++t) out[f * s1 + t] += w * row[t];
      }
    }
  }
  return eo;
}

Tensor2 OptInterModel::embed_cross(
    std::span<const EncodedInstance* const> batch) const {
  const size_t np = layout_.num_pairs();
  const size_t s2 = config_.s2;
  Tensor2 em(batch.size(), np * s2);
  for (size_t r = 0; r < batch.size(); ++r) {
    const EncodedInstance& inst = *batch[r];
    if (inst.cross.size() != np) {
      throw ShapeError("instance has " + std::to_string(inst.cross.size()) +
                       " cross features, model expects " + std::to_string(np));
    }
    double* out = em.row(r).data();
    for (size_t p = 0; p < np; ++p) {
      if (!has_cross_table(p)) continue;
      const Tensor2& table = cross_[p].table.value;
      const uint32_t idx = inst.cross[p];
      if (idx >= table.rows()) {
        throw LookupError("pair " + std::to_string(p) + ": index " +
                          std::to_string(idx) + " >= vocabulary size " +
                          std::to_string(table.rows()));
      }
      std::copy_n(table.row(idx).data(), s2, out + p * s2);
    }
  }
  return em;
}

Tensor2 OptInterModel::forward(std::span<const EncodedInstance* const> batch,
                               const ForwardOptions& options,
                               ForwardCache* cache) const {
  Tensor2 eo = embed_original(batch);
  Tensor2 em = embed_cross(batch);
  Tensor2 eb;
  Tensor2 probs;
  if (relaxed()) {
    if (options.forced_probs != nullptr) {
      numcore::require_shape(*options.forced_probs, layout_.num_pairs(),
                             kNumMethods, "forced probabilities");
      probs = *options.forced_probs;
    } else {
      probs = relaxed_probabilities(arch_.value, options.tau, options.gumbel);
    }
    eb = combination_relaxed(eo, em, probs, layout_);
  } else {
    eb = combination_fixed(eo, em, *decision_, layout_);
  }
  Tensor2 input(batch.size(), eo.cols() + eb.cols());
  for (size_t r = 0; r < batch.size(); ++r) {
    auto dst = input.row(r);
    std::copy(eo.row(r).begin(), eo.row(r).end(), dst.begin());
    std::copy(eb.row(r).begin(), eb.row(r).end(), dst.begin() + eo.cols());
  }
  if (cache == nullptr) return mlp_.forward(input, nullptr);
  Tensor2 logits = mlp_.forward(input, &cache->mlp);
  cache->batch.assign(batch.begin(), batch.end());
  cache->eo = std::move(eo);
  cache->em = std::move(em);
  cache->probs = std::move(probs);
  cache->tau = options.tau;
  cache->forced = options.forced_probs != nullptr;
  return logits;
}

void OptInterModel::backward(const ForwardCache& cache, const Tensor2& dlogits) {
  const Tensor2 dinput = mlp_.backward(cache.mlp, dlogits);
  const size_t bsz = cache.batch.size();
  const size_t wo = cache.eo.cols();
  Tensor2 deb(bsz, dinput.cols() - wo);
  Tensor2 deo(bsz, wo);
  for (size_t r = 0; r < bsz; ++r) {
    const auto src = dinput.row(r);
    std::copy(src.begin(), src.begin() + wo, deo.row(r).begin());
    std::copy(src.begin() + wo, src.end(), deb.row(r).begin());
  }
  Tensor2 dem;
  if (relaxed()) {
    auto g = combination_relaxed_backward(deb, cache.eo, cache.em, cache.probs,
                                          cache.tau, layout_);
    for (size_t i = 0; i < deo.size(); ++i) deo[i] += g.deo[i];
    dem = std::move(g.dem);
    if (!cache.forced) {
      for (size_t i = 0; i < arch_.grad.size(); ++i) {
        arch_.grad[i] += g.dlog_alpha[i];
      }
    }
  } else {
    auto g = combination_fixed_backward(deb, cache.eo, *decision_, layout_);
    for (size_t i = 0; i < deo.size(); ++i) deo[i] += g.deo[i];
    dem = std::move(g.dem);
  }

  const size_t m = dims_.num_fields();
  const size_t s1 = config_.s1;
  const size_t s2 = config_.s2;
  for (size_t r = 0; r < bsz; ++r) {
    const EncodedInstance& inst = *cache.batch[r];
    const double* go = deo.row(r).data();
    for (size_t f = 0; f < m; ++f) {
      const auto& fv = inst.original[f];
      if (fv.indices.empty()) continue;
      EmbeddingTable& table = original_[f];
      const double w = fv.scalar / static_cast<double>(fv.indices.size());
      for (uint32_t idx : fv.indices) {
        double* g = table.table.grad.row(idx).data();
        for (size_t t = 0; t < s1; ++t) g[t] += w * go[f * s1 + t];
        table.touch(idx);
      }
    }
    const double* gm = dem.row(r).data();
    for (size_t p = 0; p < layout_.num_pairs(); ++p) {
      if (!has_cross_table(p)) continue;
      EmbeddingTable& table = cross_[p];
      const uint32_t idx = inst.cross[p];
      double* g = table.table.grad.row(idx).data();
      for (size_t t = 0; t < s2; ++t) g[t] += gm[p * s2 + t];
      table.touch(idx);
    }
  }
}

std::vector<double> OptInterModel::predict(const datakit::Dataset& data,
                                           const ForwardOptions& options,
                                           size_t batch_size) const {
  std::vector<double> out;
  out.reserve(data.size());
  std::vector<const EncodedInstance*> batch;
  for (size_t start = 0; start < data.size(); start += batch_size) {
    const size_t end = std::min(data.size(), start + batch_size);
    batch.clear();
    for (size_t i = start; i < end; ++i) batch.push_back(&data[i]);
    const Tensor2 logits = forward(batch, options, nullptr);
    for (size_t i = 0; i < logits.rows(); ++i) {
      out.push_back(numcore::sigmoid(logits[i]));
    }
  }
  return out;
}

Tensor2 OptInterModel::alpha() const {
  Tensor2 a = arch_.value;
  for (double& v : a.values()) v = std::exp(v);
  return a;
}

std::vector<Parameter*> OptInterModel::parameters() {
  std::vector<Parameter*> out;
  for (auto& t : original_) out.push_back(&t.table);
  for (size_t p = 0; p < cross_.size(); ++p) {
    if (has_cross_table(p)) out.push_back(&cross_[p].table);
  }
  if (relaxed()) out.push_back(&arch_);
  for (Parameter* p : mlp_.parameters()) out.push_back(p);
  return out;
}

std::vector<const Parameter*> OptInterModel::parameters() const {
  std::vector<const Parameter*> out;
  for (Parameter* p : const_cast<OptInterModel*>(this)->parameters()) {
    out.push_back(p);
  }
  return out;
}

void OptInterModel::zero_grad() {
  for (Parameter* p : parameters()) p->zero_grad();
  for (auto& t : original_) t.clear_touched();
  for (auto& t : cross_) t.clear_touched();
}

void OptInterModel::apply_adam(UpdateScope scope) {
  numcore::AdamConfig base;
  base.beta1 = config_.adam_beta1;
  base.beta2 = config_.adam_beta2;
  base.eps = config_.adam_eps;

  const bool weights = scope != UpdateScope::kArchitectureOnly;
  const bool arch = scope != UpdateScope::kWeightsOnly && relaxed();

  if (weights) {
    numcore::AdamConfig orig = base;
    orig.lr = config_.lr_o;
    orig.l2 = config_.l2_o;
    for (auto& t : original_) {
      std::sort(t.touched.begin(), t.touched.end());
      numcore::adam_step_rows(t.table, t.touched, orig);
      t.clear_touched();
    }
    numcore::AdamConfig cross = base;
    cross.lr = config_.lr_c;
    cross.l2 = config_.l2_c;
    for (size_t p = 0; p < cross_.size(); ++p) {
      if (!has_cross_table(p)) continue;
      auto& t = cross_[p];
      std::sort(t.touched.begin(), t.touched.end());
      numcore::adam_step_rows(t.table, t.touched, cross);
      t.clear_touched();
    }
    numcore::AdamConfig net = base;
    net.lr = config_.lr_o;
    for (Parameter* p : mlp_.parameters()) numcore::adam_step(*p, net);
  } else {
    for (auto& t : original_) {
      t.table.zero_grad();
      t.clear_touched();
    }
    for (size_t p = 0; p < cross_.size(); ++p) {
      if (!has_cross_table(p)) continue;
      cross_[p].table.zero_grad();
      cross_[p].clear_touched();
    }
    for (Parameter* p : mlp_.parameters()) p->zero_grad();
  }

  if (arch) {
    numcore::AdamConfig a = base;
    a.lr = config_.lr_a;
    numcore::adam_step(arch_, a);
  } else if (relaxed()) {
    arch_.zero_grad();
  }
}

size_t OptInterModel::allocated_parameter_count() const {
  size_t n = 0;
  for (const Parameter* p : parameters()) n += p->size();
  return n;
}

ParameterLedger count_parameters(
    const ModelConfig& config, const ModelDims& dims,
    const std::optional<ArchitectureDecision>& mode) {
  ParameterLedger ledger;
  const size_t m = dims.num_fields();
  for (size_t f = 0; f < m; ++f) {
    const size_t n = static_cast<size_t>(dims.field_sizes[f]) * config.s1;
    ledger.entries.emplace_back("E_o." + std::to_string(f), n);
    ledger.original += n;
  }
  const CombinationLayout layout =
      CombinationLayout::make(m, config.s1, config.s2);
  if (mode && mode->num_pairs() != dims.num_pairs()) {
    throw ConfigError("count_parameters: decision does not cover all pairs");
  }
  for (size_t p = 0; p < dims.num_pairs(); ++p) {
    if (mode && (*mode)[p] != Method::kMemorize) continue;
    const size_t n = static_cast<size_t>(dims.pair_sizes[p]) * config.s2;
    ledger.entries.emplace_back("E_m." + std::to_string(p), n);
    ledger.cross += n;
  }
  size_t width = m * config.s1;
  if (!mode) {
    ledger.architecture = dims.num_pairs() * kNumMethods;
    ledger.entries.emplace_back("log_alpha", ledger.architecture);
    width += dims.num_pairs() * layout.padded_width();
  } else {
    width += fixed_width(*mode, layout);
  }
  ledger.classifier = Mlp::count(width, config.mlp_layers, config.layer_norm);
  ledger.entries.emplace_back("mlp", ledger.classifier);
  return ledger;
}

ParameterLedger count_parameters(
    const OptInterModel& model,
    const std::optional<ArchitectureDecision>& mode) {
  return count_parameters(model.config(), model.dims(), mode);
}

ParameterLedger count_parameters(const OptInterModel& model) {
  return count_parameters(model, model.decision());
}

}  // namespace optinter::model
