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

#include <cmath>
#include <map>
#include <sstream>

#include "gtest/gtest.h"
#include "optinter/errors.h"
#include "optinter/model/architecture.h"
#include "optinter/model/checkpoint.h"
#include "optinter/model/combination.h"
#include "optinter/model/mlp.h"
#include "optinter/model/optinter_model.h"
#include "optinter/numcore/grad_check.h"
#include "optinter/numcore/ops.h"
#include "test_util.h"

namespace optinter::model {
namespace {

using datakit::Dataset;
using datakit::FieldKind;
using numcore::Rng;

Tensor2 random_tensor(size_t rows, size_t cols, Rng& rng, double scale = 1.0) {
  Tensor2 t(rows, cols);
  for (double& v : t.values()) v = rng.uniform(-scale, scale);
  return t;
}

std::vector<const EncodedInstance*> all_rows(const Dataset& d) {
  std::vector<const EncodedInstance*> out;
  for (size_t i = 0; i < d.size(); ++i) out.push_back(&d[i]);
  return out;
}

ModelConfig small_config(uint32_t s1, uint32_t s2,
                         std::vector<uint32_t> layers = {6, 4}) {
  ModelConfig c;
  c.s1 = s1;
  c.s2 = s2;
  c.mlp_layers = std::move(layers);
  c.seed = 3;
  return c;
}

TEST(HadamardTest, Definition) {
  const std::vector<double> a = {1, 2}, b = {3, 4};
  EXPECT_EQ(hadamard(a, b), (std::vector<double>{3, 8}));
  EXPECT_EQ(hadamard(a, std::vector<double>{1, 1}), a);
  EXPECT_EQ(hadamard(a, std::vector<double>{0, 0}),
            (std::vector<double>{0, 0}));
  EXPECT_THROW(hadamard(a, std::vector<double>{1}), ShapeError);
}

TEST(ArchitectureTest, JsonUsesOneBasedPairs) {
  const ArchitectureDecision d(
      3, {Method::kMemorize, Method::kFactorize, Method::kNaive});
  const auto j = d.to_json();
  EXPECT_EQ(j["pairs"]["(1,2)"], "memorize");
  EXPECT_EQ(j["pairs"]["(2,3)"], "naive");
  EXPECT_EQ(ArchitectureDecision::from_json(j), d);
  EXPECT_EQ(d.counts(), (std::array<size_t, 3>{1, 1, 1}));
}

TEST(ArchitectureTest, MissingPairRejected) {
  auto j = ArchitectureDecision::uniform(3, Method::kNaive).to_json();
  j["pairs"].erase("(1,3)");
  EXPECT_THROW(ArchitectureDecision::from_json(j), ConfigError);
  EXPECT_THROW(ArchitectureDecision(3, {Method::kNaive}), ConfigError);
}

TEST(ArchitectureTest, FileRoundTrip) {
  testing::TempDir dir("arch");
  const ArchitectureDecision d(
      4, {Method::kMemorize, Method::kNaive, Method::kNaive, Method::kFactorize,
          Method::kMemorize, Method::kNaive});
  d.save(dir.file("decision.json"));
  EXPECT_EQ(ArchitectureDecision::load(dir.file("decision.json")), d);
}

TEST(ModelConfigTest, JsonKeysAndValidation) {
  ModelConfig c = small_config(20, 10, {400, 400});
  c.layer_norm = false;
  const auto j = c.to_json();
  EXPECT_EQ(j["s1"], 20);
  EXPECT_EQ(j["net"], nlohmann::json({400, 400}));
  EXPECT_EQ(j["LN"], false);
  EXPECT_EQ(ModelConfig::from_json(j), c);
  c.s1 = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

class EmbedTest : public ::testing::Test {
 protected:
  void SetUp() override {
    schema_ = testing::make_schema({{"u", FieldKind::kUnivalent},
                                    {"m", FieldKind::kMultivalent},
                                    {"c", FieldKind::kContinuous}});
    const auto table = testing::parse_text(
        "label,u,m,c\n1,a,x|y,0\n0,b,y,4\n1,a,x,2\n");
    vocab_ = std::make_shared<const datakit::Vocabulary>(
        datakit::Vocabulary::build(table, schema_, {}));
    data_ = datakit::encode_table(table, vocab_, datakit::Split::kTrain);
  }

  datakit::FeatureSchema schema_;
  std::shared_ptr<const datakit::Vocabulary> vocab_;
  Dataset data_;
};

TEST_F(EmbedTest, PoolingAndScaling) {
  const OptInterModel model(small_config(3, 2),
                            ModelDims::from_vocabulary(*vocab_));
  const Tensor2 eo = model.embed_original(all_rows(data_));
  auto& tables = const_cast<OptInterModel&>(model).original_tables();
  const Tensor2& em = tables[1].table.value;
  const uint32_t x = vocab_->lookup_value(1, "x");
  const uint32_t y = vocab_->lookup_value(1, "y");
  for (size_t t = 0; t < 3; ++t) {
    // Row 0: multivalent {x, y} is the mean of the two rows.
    EXPECT_DOUBLE_EQ(eo(0, 3 + t), 0.5 * (em(x, t) + em(y, t)));
    // Row 2: a single value equals the plain lookup.
    EXPECT_EQ(eo(2, 3 + t), em(x, t));
    // Continuous 0 contributes nothing; 4 is the max so it scales by 1.
    EXPECT_EQ(eo(0, 6 + t), 0.0);
    EXPECT_EQ(eo(1, 6 + t), tables[2].table.value(0, t));
    EXPECT_EQ(eo(2, 6 + t), 0.5 * tables[2].table.value(0, t));
  }
}

TEST_F(EmbedTest, OutOfRangeIndexRaisesLookupError) {
  const OptInterModel model(small_config(3, 2),
                            ModelDims::from_vocabulary(*vocab_));
  EncodedInstance bad = data_[0];
  bad.original[0].indices[0] = 999;
  const EncodedInstance* rows[] = {&bad};
  EXPECT_THROW(model.embed_original(rows), LookupError);
  bad = data_[0];
  bad.cross[1] = 999;
  EXPECT_THROW(model.embed_cross(rows), LookupError);
}

TEST(CombinationTest, ForcedMemorizeGivesPaddedCrossEmbedding) {
  Rng rng(1);
  const auto layout = CombinationLayout::make(3, 2, 4);
  const Tensor2 eo = random_tensor(2, 6, rng);
  const Tensor2 em = random_tensor(2, 12, rng);
  Tensor2 probs(3, 3);
  for (size_t p = 0; p < 3; ++p) probs(p, 0) = 1.0;
  const Tensor2 eb = combination_relaxed(eo, em, probs, layout);
  ASSERT_EQ(eb.cols(), 12u);
  for (size_t r = 0; r < 2; ++r) {
    for (size_t k = 0; k < 12; ++k) EXPECT_EQ(eb(r, k), em(r, k));
  }
}

TEST(CombinationTest, FactorizeSlotIsZeroPadded) {
  Rng rng(2);
  const auto layout = CombinationLayout::make(2, 2, 3);
  const Tensor2 eo = random_tensor(1, 4, rng);
  const Tensor2 em = random_tensor(1, 3, rng);
  const Tensor2 probs = Tensor2::from_rows({{0, 1, 0}});
  const Tensor2 eb = combination_relaxed(eo, em, probs, layout);
  EXPECT_EQ(eb(0, 0), eo(0, 0) * eo(0, 2));
  EXPECT_EQ(eb(0, 1), eo(0, 1) * eo(0, 3));
  EXPECT_EQ(eb(0, 2), 0.0);
}

TEST(CombinationTest, EqualLogitsGiveUniformProbabilities) {
  const Tensor2 log_alpha(4, 3, 0.37);
  for (double tau : {0.01, 1.0, 5.0}) {
    const Tensor2 p = relaxed_probabilities(log_alpha, tau, nullptr);
    for (double v : p.values()) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
  }
  EXPECT_THROW(relaxed_probabilities(log_alpha, 0.0, nullptr), DomainError);
}

TEST(CombinationTest, ProbabilitiesStayOnSimplex) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Tensor2 la = random_tensor(5, 3, rng, 2.0);
    const Tensor2 g = random_tensor(5, 3, rng, 2.0);
    const double tau = rng.uniform(0.5, 2.0);
    const Tensor2 p = relaxed_probabilities(la, tau, &g);
    for (size_t r = 0; r < 5; ++r) {
      double s = 0.0;
      for (size_t k = 0; k < 3; ++k) {
        EXPECT_GT(p(r, k), 0.0);
        EXPECT_LT(p(r, k), 1.0);
        s += p(r, k);
      }
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
  }
}

TEST(CombinationTest, LowTemperatureApproachesArgmaxSelection) {
  Rng rng(4);
  const size_t m = 4;
  const auto layout = CombinationLayout::make(m, 3, 5);
  const size_t np = layout.num_pairs();
  Tensor2 la = random_tensor(np, 3, rng, 2.0);
  // Open a margin of at least 0.1 between the top logit and the runner-up.
  for (size_t p = 0; p < np; ++p) {
    const size_t top = rng.uniform_int(3);
    double other = -1e9;
    for (size_t k = 0; k < 3; ++k) {
      if (k != top) other = std::max(other, la(p, k));
    }
    la(p, top) = other + 0.1 + rng.uniform();
  }
  const Tensor2 eo = random_tensor(3, m * 3, rng);
  const Tensor2 em = random_tensor(3, np * 5, rng);
  const Tensor2 relaxed = combination_relaxed(
      eo, em, relaxed_probabilities(la, 1e-3, nullptr), layout);
  // Oracle: lay out the selected candidate of every pair by hand.
  for (size_t r = 0; r < 3; ++r) {
    for (size_t p = 0; p < np; ++p) {
      size_t best = 0;
      for (size_t k = 1; k < 3; ++k) {
        if (la(p, k) > la(p, best)) best = k;
      }
      const auto [i, j] = layout.pairs[p];
      for (size_t t = 0; t < 5; ++t) {
        double expected = 0.0;
        if (best == 0) expected = em(r, p * 5 + t);
        if (best == 1 && t < 3) expected = eo(r, i * 3 + t) * eo(r, j * 3 + t);
        EXPECT_NEAR(relaxed(r, p * 5 + t), expected, 1e-6);
      }
    }
  }
}

TEST(CombinationTest, FixedLayoutByHand) {
  Rng rng(5);
  const auto layout = CombinationLayout::make(3, 2, 3);
  const ArchitectureDecision d(
      3, {Method::kMemorize, Method::kFactorize, Method::kNaive});
  EXPECT_EQ(fixed_width(d, layout), 3u + 2u);
  const Tensor2 eo = random_tensor(2, 6, rng);
  const Tensor2 em = random_tensor(2, 9, rng);
  const Tensor2 eb = combination_fixed(eo, em, d, layout);
  for (size_t r = 0; r < 2; ++r) {
    const std::vector<double> expected = {
        em(r, 0), em(r, 1), em(r, 2),                    // (1,2) memorized
        eo(r, 0) * eo(r, 4), eo(r, 1) * eo(r, 5)};       // (1,3) factorized
    ASSERT_EQ(eb.cols(), expected.size());
    for (size_t k = 0; k < expected.size(); ++k) EXPECT_EQ(eb(r, k), expected[k]);
  }
  EXPECT_EQ(fixed_width(ArchitectureDecision::uniform(3, Method::kNaive), layout),
            0u);
  EXPECT_EQ(
      fixed_width(ArchitectureDecision::uniform(3, Method::kMemorize), layout),
      9u);
  EXPECT_THROW(fixed_width(ArchitectureDecision::uniform(4, Method::kNaive),
                           layout),
               ConfigError);
}

TEST(MlpTest, ZeroWeightsGiveZeroLogit) {
  Rng rng(6);
  Mlp mlp(5, {4, 3}, true, 1e-5, rng);
  for (Parameter* p : mlp.parameters()) {
    if (p->name.find("gamma") != std::string::npos) continue;
    p->value.fill(0.0);
  }
  const Tensor2 logits = mlp.forward(random_tensor(3, 5, rng));
  for (double v : logits.values()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(numcore::sigmoid(logits[0]), 0.5);
}

TEST(MlpTest, DepthZeroIsAffineReadout) {
  Rng rng(7);
  Mlp mlp(4, {}, true, 1e-5, rng);
  const Tensor2 x = random_tensor(2, 4, rng);
  const Tensor2 y = mlp.forward(x);
  const Tensor2 expected =
      numcore::affine_forward(x, mlp.readout_w().value, mlp.readout_b().value);
  EXPECT_EQ(y, expected);
  EXPECT_EQ(Mlp::count(4, {}, true), 5u);
  EXPECT_THROW(mlp.forward(Tensor2(2, 3)), ShapeError);
}

TEST(MlpTest, LayerOrderIsNormAfterRelu) {
  // One hidden layer: LN(relu(xW + b)) then readout, built by hand.
  Rng rng(8);
  Mlp mlp(3, {4}, true, 1e-5, rng);
  auto& h = mlp.hidden()[0];
  h.gamma.value = random_tensor(1, 4, rng);
  h.beta.value = random_tensor(1, 4, rng);
  const Tensor2 x = random_tensor(2, 3, rng);
  const Tensor2 a = numcore::layernorm_forward(
      numcore::relu_forward(numcore::affine_forward(x, h.w.value, h.b.value)),
      h.gamma.value, h.beta.value, 1e-5);
  const Tensor2 expected =
      numcore::affine_forward(a, mlp.readout_w().value, mlp.readout_b().value);
  EXPECT_EQ(mlp.forward(x), expected);
}

TEST(MlpTest, ThreeLayerGradientCheck) {
  Rng rng(9);
  Mlp mlp(5, {6, 4, 3}, true, 1e-5, rng);
  for (auto& layer : mlp.hidden()) {
    layer.b.value = random_tensor(1, layer.b.value.cols(), rng, 0.5);
    layer.gamma.value = random_tensor(1, layer.gamma.value.cols(), rng);
    layer.beta.value = random_tensor(1, layer.beta.value.cols(), rng);
  }
  const Tensor2 x = random_tensor(4, 5, rng);
  const std::vector<double> y = {1, 0, 1, 1};
  auto loss = [&] { return numcore::bce_with_logits(mlp.forward(x), y).loss; };
  auto grads = [&] {
    MlpCache cache;
    const Tensor2 logits = mlp.forward(x, &cache);
    mlp.backward(cache, numcore::bce_with_logits(logits, y).grad);
  };
  auto params = mlp.parameters();
  const auto report = numcore::grad_check(loss, grads, params);
  EXPECT_TRUE(report.passed) << report.max_rel_error;
}

// Small relaxed model with perturbed (non-initial) parameters so that every
// block has a generic gradient.
struct GradFixture {
  Dataset data;
  std::unique_ptr<OptInterModel> model;
  Tensor2 noise;
};

GradFixture make_grad_fixture(uint32_t s1, uint32_t s2) {
  GradFixture f;
  f.data = testing::random_dataset({3, 4, 2, 3}, 8, 21);
  f.model = std::make_unique<OptInterModel>(
      small_config(s1, s2, {5, 3}), ModelDims::from_vocabulary(f.data.vocabulary()));
  Rng rng(22);
  for (Parameter* p : f.model->parameters()) {
    for (double& v : p->value.values()) v += rng.uniform(-0.3, 0.3);
  }
  f.noise = random_tensor(6, 3, rng, 1.0);
  return f;
}

TEST(ModelGradTest, EveryBlockMatchesFiniteDifferences) {
  for (bool gumbel : {false, true}) {
    auto f = make_grad_fixture(3, 2);
    const auto batch = all_rows(f.data);
    const auto labels = f.data.labels();
    ForwardOptions opts;
    opts.tau = 0.7;
    if (gumbel) opts.gumbel = &f.noise;
    auto loss = [&] {
      return numcore::bce_with_logits(f.model->forward(batch, opts), labels).loss;
    };
    auto grads = [&] {
      ForwardCache cache;
      const Tensor2 logits = f.model->forward(batch, opts, &cache);
      f.model->backward(cache, numcore::bce_with_logits(logits, labels).grad);
    };
    auto params = f.model->parameters();
    const auto report = numcore::grad_check(loss, grads, params);
    EXPECT_LT(report.max_rel_error, 1e-4) << "gumbel " << gumbel;
    bool saw_alpha = false;
    for (const auto& b : report.blocks) saw_alpha |= b.name == "log_alpha";
    EXPECT_TRUE(saw_alpha);
  }
}

TEST(ModelGradTest, FixedModeMatchesFiniteDifferences) {
  const auto data = testing::random_dataset({3, 4, 2, 3}, 8, 23);
  const ArchitectureDecision d(
      4, {Method::kMemorize, Method::kFactorize, Method::kNaive,
          Method::kFactorize, Method::kMemorize, Method::kNaive});
  OptInterModel model(small_config(3, 2, {4}),
                      ModelDims::from_vocabulary(data.vocabulary()), d);
  const auto batch = all_rows(data);
  const auto labels = data.labels();
  auto loss = [&] {
    return numcore::bce_with_logits(model.forward(batch, {}), labels).loss;
  };
  auto grads = [&] {
    ForwardCache cache;
    const Tensor2 logits = model.forward(batch, {}, &cache);
    model.backward(cache, numcore::bce_with_logits(logits, labels).grad);
  };
  auto params = model.parameters();
  EXPECT_LT(numcore::grad_check(loss, grads, params).max_rel_error, 1e-4);
}

TEST(ModelTest, ForcedFactorizeEqualsFixedAllFactorize) {
  const auto data = testing::random_dataset({4, 3, 5}, 20, 24);
  const auto dims = ModelDims::from_vocabulary(data.vocabulary());
  const auto cfg = small_config(4, 4, {5, 3});
  OptInterModel relaxed(cfg, dims);
  OptInterModel fixed(cfg, dims,
                      ArchitectureDecision::uniform(3, Method::kFactorize));
  std::map<std::string, Parameter*> by_name;
  for (Parameter* p : relaxed.parameters()) by_name[p->name] = p;
  for (Parameter* p : fixed.parameters()) {
    ASSERT_TRUE(by_name.count(p->name)) << p->name;
    ASSERT_TRUE(p->value.same_shape(by_name[p->name]->value)) << p->name;
    p->value = by_name[p->name]->value;
  }
  Tensor2 forced(3, 3);
  for (size_t p = 0; p < 3; ++p) forced(p, 1) = 1.0;
  ForwardOptions opts;
  opts.forced_probs = &forced;
  const auto batch = all_rows(data);
  EXPECT_EQ(relaxed.forward(batch, opts), fixed.forward(batch, {}));
}

TEST(ModelTest, FixedModeAllocatesOnlyMemorizedTables) {
  const auto data = testing::random_dataset({4, 3, 5}, 20, 25);
  const auto dims = ModelDims::from_vocabulary(data.vocabulary());
  const ArchitectureDecision d(
      3, {Method::kNaive, Method::kMemorize, Method::kFactorize});
  OptInterModel model(small_config(2, 3), dims, d);
  size_t cross_blocks = 0;
  for (Parameter* p : model.parameters()) {
    if (p->name.rfind("E_m.", 0) == 0) {
      ++cross_blocks;
      EXPECT_EQ(p->name, "E_m.1");
    }
    EXPECT_NE(p->name, "log_alpha");
  }
  EXPECT_EQ(cross_blocks, 1u);
  EXPECT_EQ(model.classifier_input_width(), 3u * 2u + 3u + 2u);
}

TEST(ModelTest, AllNaiveInputIsOriginalEmbeddingsOnly) {
  const auto data = testing::random_dataset({4, 3, 5}, 20, 26);
  OptInterModel model(small_config(5, 3),
                      ModelDims::from_vocabulary(data.vocabulary()),
                      ArchitectureDecision::uniform(3, Method::kNaive));
  EXPECT_EQ(model.classifier_input_width(), 15u);
  OptInterModel mem(small_config(5, 3),
                    ModelDims::from_vocabulary(data.vocabulary()),
                    ArchitectureDecision::uniform(3, Method::kMemorize));
  EXPECT_EQ(mem.classifier_input_width(), 15u + 9u);
}

TEST(ModelTest, UpdateScopesTouchOnlyTheirFamilies) {
  auto f = make_grad_fixture(3, 2);
  const auto batch = all_rows(f.data);
  const auto labels = f.data.labels();
  auto step = [&](UpdateScope scope) {
    ForwardCache cache;
    const Tensor2 logits = f.model->forward(batch, {}, &cache);
    f.model->backward(cache, numcore::bce_with_logits(logits, labels).grad);
    f.model->apply_adam(scope);
  };
  const Tensor2 alpha0 = f.model->arch_logits().value;
  const Tensor2 w0 = f.model->mlp().readout_w().value;
  step(UpdateScope::kWeightsOnly);
  EXPECT_EQ(f.model->arch_logits().value, alpha0);
  EXPECT_NE(f.model->mlp().readout_w().value, w0);
  const Tensor2 w1 = f.model->mlp().readout_w().value;
  step(UpdateScope::kArchitectureOnly);
  EXPECT_NE(f.model->arch_logits().value, alpha0);
  EXPECT_EQ(f.model->mlp().readout_w().value, w1);
  for (const Parameter* p : std::as_const(*f.model).parameters()) {
    for (double g : p->grad.values()) ASSERT_EQ(g, 0.0) << p->name;
  }
}

TEST(ModelTest, SameSeedSameInitialization) {
  const auto data = testing::random_dataset({4, 3, 5}, 20, 27);
  const auto dims = ModelDims::from_vocabulary(data.vocabulary());
  const OptInterModel a(small_config(3, 2), dims);
  const OptInterModel b(small_config(3, 2), dims);
  auto pa = a.parameters();
  auto pb = b.parameters();
  ASSERT_EQ(pa.size(), pb.size());
  for (size_t k = 0; k < pa.size(); ++k) EXPECT_EQ(pa[k]->value, pb[k]->value);
  auto cfg = small_config(3, 2);
  cfg.seed = 4;
  const OptInterModel c(cfg, dims);
  EXPECT_NE(c.parameters()[0]->value, pa[0]->value);
}

// Hand-summed ledgers. Config: 3 fields with vocab sizes 5, 7, 4 and pair
// vocab sizes 10, 12, 9.
ModelDims toy_dims() { return {{5, 7, 4}, {10, 12, 9}}; }

TEST(CountParametersTest, RelaxedToyLedger) {
  // E^o 5*4 + 7*4 + 4*4 = 64; E^m 10*3 + 12*3 + 9*3 = 93; alpha 3*3 = 9;
  // classifier input 3*4 + 3*max(4,3) = 24: 24*6 + 6 + 2*6 (LN) + 6 + 1 = 169.
  const auto cfg = small_config(4, 3, {6});
  const auto ledger = count_parameters(cfg, toy_dims(), std::nullopt);
  EXPECT_EQ(ledger.original, 64u);
  EXPECT_EQ(ledger.cross, 93u);
  EXPECT_EQ(ledger.architecture, 9u);
  EXPECT_EQ(ledger.classifier, 169u);
  EXPECT_EQ(ledger.total(), 335u);
  const OptInterModel model(cfg, toy_dims());
  EXPECT_EQ(model.allocated_parameter_count(), 335u);
}

TEST(CountParametersTest, MixedFixedToyLedger) {
  // Decision (m, f, n): only pair (1,2) keeps its table, 10*3 = 30; input
  // width 12 + 3 + 4 = 19: 19*6 + 6 + 12 + 7 = 139; 64 + 30 + 139 = 233.
  const auto cfg = small_config(4, 3, {6});
  const ArchitectureDecision d(
      3, {Method::kMemorize, Method::kFactorize, Method::kNaive});
  const auto ledger = count_parameters(cfg, toy_dims(), d);
  EXPECT_EQ(ledger.cross, 30u);
  EXPECT_EQ(ledger.architecture, 0u);
  EXPECT_EQ(ledger.total(), 233u);
  const OptInterModel model(cfg, toy_dims(), d);
  EXPECT_EQ(count_parameters(model).total(), 233u);
  EXPECT_EQ(model.allocated_parameter_count(), 233u);
}

TEST(CountParametersTest, AllNaiveNoNormToyLedger) {
  // s1 = 2: E^o 10 + 14 + 8 = 32, no E^m; input width 6, layers 5 and 3
  // without LN: 6*5 + 5 + 5*3 + 3 + 3 + 1 = 57; total 89.
  auto cfg = small_config(2, 6, {5, 3});
  cfg.layer_norm = false;
  const auto d = ArchitectureDecision::uniform(3, Method::kNaive);
  const auto ledger = count_parameters(cfg, toy_dims(), d);
  EXPECT_EQ(ledger.cross, 0u);
  EXPECT_EQ(ledger.total(), 89u);
  EXPECT_EQ(OptInterModel(cfg, toy_dims(), d).allocated_parameter_count(), 89u);
}

TEST(CountParametersTest, SingleFieldEmbeddingLedger) {
  auto cfg = small_config(20, 8, {});
  const ModelDims dims{{100}, {}};
  const auto ledger =
      count_parameters(cfg, dims, ArchitectureDecision::uniform(1, Method::kNaive));
  EXPECT_EQ(ledger.embeddings(), 2000u);
  EXPECT_EQ(ledger.classifier, 21u);
}

TEST(CheckpointTest, RoundTripIsBitExact) {
  auto f = make_grad_fixture(3, 2);
  std::stringstream buf;
  save_checkpoint(*f.model, "abc123", 0.4, buf);
  const auto loaded = load_checkpoint(buf, "abc123");
  EXPECT_EQ(loaded.tau, 0.4);
  const auto batch = all_rows(f.data);
  ForwardOptions opts;
  opts.tau = 0.4;
  EXPECT_EQ(loaded.model.forward(batch, opts), f.model->forward(batch, opts));
  EXPECT_EQ(loaded.model.arch_logits().value, f.model->arch_logits().value);
}

TEST(CheckpointTest, FixedModelKeepsDecisionAndCount) {
  const ArchitectureDecision d(
      3, {Method::kMemorize, Method::kFactorize, Method::kNaive});
  const OptInterModel model(small_config(4, 3, {6}), toy_dims(), d);
  testing::TempDir dir("ckpt");
  save_checkpoint(model, "h", 1.0, dir.file("model.ckpt"));
  const auto loaded = load_checkpoint(dir.file("model.ckpt"));
  ASSERT_TRUE(loaded.model.decision().has_value());
  EXPECT_EQ(*loaded.model.decision(), d);
  EXPECT_EQ(count_parameters(loaded.model).total(),
            count_parameters(model).total());
}

TEST(CheckpointTest, SchemaMismatchAndCorruptionRejected) {
  const OptInterModel model(small_config(4, 3, {6}), toy_dims());
  std::stringstream buf;
  save_checkpoint(model, "schema-a", 1.0, buf);
  const std::string bytes = buf.str();
  {
    std::stringstream in(bytes);
    EXPECT_THROW(load_checkpoint(in, "schema-b"), CompatibilityError);
  }
  {
    std::stringstream in(bytes.substr(0, bytes.size() - 9));
    EXPECT_THROW(load_checkpoint(in), FormatError);
  }
  {
    std::string bad = bytes;
    bad[14] = 7;  // format version
    std::stringstream in(bad);
    EXPECT_THROW(load_checkpoint(in), FormatError);
  }
}

}  // namespace
}  // namespace optinter::model
