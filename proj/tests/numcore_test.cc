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
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "optinter/errors.h"
#include "optinter/numcore/adam.h"
#include "optinter/numcore/grad_check.h"
#include "optinter/numcore/ops.h"
#include "optinter/numcore/rng.h"
#include "optinter/numcore/tensor.h"

namespace optinter::numcore {
namespace {

Tensor2 random_tensor(size_t rows, size_t cols, Rng& rng, double scale = 1.0) {
  Tensor2 t(rows, cols);
  for (double& v : t.values()) v = rng.uniform(-scale, scale);
  return t;
}

// Central difference of a scalar function of one tensor, written out here
// rather than through grad_check so the layer tests have their own oracle.
template <typename F>
Tensor2 numeric_grad(Tensor2& x, F&& f, double h = 1e-6) {
  Tensor2 g(x.rows(), x.cols());
  for (size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double up = f();
    x[i] = saved - h;
    const double down = f();
    x[i] = saved;
    g[i] = (up - down) / (2 * h);
  }
  return g;
}

double weighted_sum(const Tensor2& y, const Tensor2& w) {
  double s = 0.0;
  for (size_t i = 0; i < y.size(); ++i) s += y[i] * w[i];
  return s;
}

void expect_close(const Tensor2& a, const Tensor2& b, double tol) {
  ASSERT_TRUE(a.same_shape(b)) << a.shape_string() << " vs " << b.shape_string();
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i], b[i], tol) << "flat index " << i;
  }
}

TEST(RngTest, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RngTest, MatchesStandardEngine) {
  std::mt19937_64 ref(7);
  Rng rng(7);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(rng.next_u64(), ref());
}

TEST(RngTest, UniformStaysInUnitInterval) {
  Rng rng(1);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(RngTest, UniformIntCoversRangeEvenly) {
  Rng rng(3);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.uniform_int(7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 400);
}

TEST(RngTest, NormalMoments) {
  Rng rng(5);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.015);
}

TEST(RngTest, ForkDoesNotAdvanceParent) {
  Rng a(9), b(9);
  Rng child = a.fork(1);
  EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_NE(child.next_u64(), a.fork(2).next_u64());
  EXPECT_EQ(Rng(9).fork(1).next_u64(), Rng(9).fork(1).next_u64());
}

TEST(TensorTest, RowMajorLayout) {
  Tensor2 t = Tensor2::from_rows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.cols(), 3u);
  EXPECT_EQ(t(1, 0), 4.0);
  EXPECT_EQ(t[5], 6.0);
  EXPECT_EQ(t.row(1)[2], 6.0);
}

TEST(TensorTest, RaggedRowsRejected) {
  EXPECT_THROW(Tensor2::from_rows({{1, 2}, {3}}), ShapeError);
  EXPECT_THROW(Tensor2(2, 2, std::vector<double>{1, 2, 3}), ShapeError);
}

TEST(TensorTest, RequireShape) {
  Tensor2 t(2, 3);
  EXPECT_NO_THROW(require_shape(t, 2, 3, "t"));
  EXPECT_THROW(require_shape(t, 3, 2, "t"), ShapeError);
}

TEST(OpsTest, AffineForwardByHand) {
  const Tensor2 x = Tensor2::from_rows({{1, 2}, {-1, 0.5}});
  const Tensor2 w = Tensor2::from_rows({{1, 0, 2}, {3, -1, 1}});
  const Tensor2 b = Tensor2::from_rows({{0.5, 0, -1}});
  const Tensor2 y = affine_forward(x, w, b);
  expect_close(y, Tensor2::from_rows({{7.5, -2, 3}, {1, -0.5, -2.5}}), 1e-15);
}

TEST(OpsTest, AffineShapeMismatch) {
  EXPECT_THROW(affine_forward(Tensor2(2, 3), Tensor2(2, 2), Tensor2(1, 2)),
               ShapeError);
  EXPECT_THROW(affine_forward(Tensor2(2, 2), Tensor2(2, 2), Tensor2(1, 3)),
               ShapeError);
}

TEST(OpsTest, AffineBackwardMatchesFiniteDifferences) {
  Rng rng(11);
  Tensor2 x = random_tensor(3, 4, rng);
  Tensor2 w = random_tensor(4, 2, rng);
  Tensor2 b = random_tensor(1, 2, rng);
  const Tensor2 probe = random_tensor(3, 2, rng);
  auto f = [&] { return weighted_sum(affine_forward(x, w, b), probe); };
  const AffineGrads g = affine_backward(x, w, probe);
  expect_close(g.dx, numeric_grad(x, f), 1e-8);
  expect_close(g.dw, numeric_grad(w, f), 1e-8);
  expect_close(g.db, numeric_grad(b, f), 1e-8);
}

TEST(OpsTest, ReluGradientMask) {
  const Tensor2 z = Tensor2::from_rows({{-1, 0, 2}});
  expect_close(relu_forward(z), Tensor2::from_rows({{0, 0, 2}}), 0);
  expect_close(relu_backward(z, Tensor2::from_rows({{5, 5, 5}})),
               Tensor2::from_rows({{0, 0, 5}}), 0);
}

TEST(OpsTest, LayerNormForwardByHand) {
  // Row (1, 2, 3): mean 2, variance 2/3.
  const Tensor2 z = Tensor2::from_rows({{1, 2, 3}});
  const Tensor2 gamma = Tensor2::from_rows({{1, 2, 1}});
  const Tensor2 beta = Tensor2::from_rows({{0, 0, 1}});
  const double eps = 1e-5;
  const double s = 1.0 / std::sqrt(2.0 / 3.0 + eps);
  const Tensor2 y = layernorm_forward(z, gamma, beta, eps);
  expect_close(y, Tensor2::from_rows({{-s, 0, s + 1}}), 1e-14);
}

TEST(OpsTest, LayerNormRejectsNonPositiveEps) {
  Tensor2 g(1, 2, 1.0), b(1, 2);
  EXPECT_THROW(layernorm_forward(Tensor2(1, 2), g, b, 0.0), DomainError);
}

TEST(OpsTest, LayerNormBackwardMatchesFiniteDifferences) {
  Rng rng(12);
  Tensor2 z = random_tensor(4, 5, rng, 2.0);
  Tensor2 gamma = random_tensor(1, 5, rng);
  Tensor2 beta = random_tensor(1, 5, rng);
  const Tensor2 probe = random_tensor(4, 5, rng);
  auto f = [&] {
    return weighted_sum(layernorm_forward(z, gamma, beta, 1e-5), probe);
  };
  LayerNormCache cache;
  layernorm_forward(z, gamma, beta, 1e-5, &cache);
  const LayerNormGrads g = layernorm_backward(probe, cache, gamma);
  expect_close(g.dz, numeric_grad(z, f), 1e-7);
  expect_close(g.dgamma, numeric_grad(gamma, f), 1e-7);
  expect_close(g.dbeta, numeric_grad(beta, f), 1e-7);
}

TEST(OpsTest, SigmoidStableAtExtremes) {
  EXPECT_DOUBLE_EQ(sigmoid(0.0), 0.5);
  EXPECT_EQ(sigmoid(-800.0), 0.0);
  EXPECT_EQ(sigmoid(800.0), 1.0);
  EXPECT_NEAR(sigmoid(2.0), 1.0 / (1.0 + std::exp(-2.0)), 1e-16);
}

TEST(OpsTest, BceOfHalfIsLn2) {
  const Tensor2 p(2, 1, 0.5);
  const std::vector<double> y = {1, 0};
  EXPECT_NEAR(bce_loss(p, y).loss, std::log(2.0), 1e-15);
}

TEST(OpsTest, BceWithLogitsGradient) {
  Rng rng(13);
  Tensor2 logits = random_tensor(5, 1, rng, 3.0);
  const std::vector<double> y = {1, 0, 0, 1, 1};
  const LossResult r = bce_with_logits(logits, y);
  expect_close(r.grad,
               numeric_grad(logits, [&] { return bce_with_logits(logits, y).loss; }),
               1e-9);
}

TEST(OpsTest, BceRejectsBadLabels) {
  const std::vector<double> y = {1, 0.5};
  EXPECT_THROW(bce_loss(Tensor2(2, 1, 0.5), y), DomainError);
  EXPECT_THROW(bce_loss(Tensor2(3, 1, 0.5), std::vector<double>{1, 0}),
               ShapeError);
}

TEST(OpsTest, XavierBoundAndRange) {
  EXPECT_DOUBLE_EQ(xavier_bound(4, 2), 1.0);
  EXPECT_THROW(xavier_bound(0, 3), DomainError);
  Rng rng(14);
  const Tensor2 w = xavier_init(100, 50, rng);
  const double bound = std::sqrt(6.0 / 150.0);
  double max_abs = 0.0;
  for (double v : w.values()) max_abs = std::max(max_abs, std::fabs(v));
  EXPECT_LE(max_abs, bound);
  EXPECT_GT(max_abs, 0.95 * bound);
}

TEST(AdamTest, FirstStepMovesByLearningRate) {
  // After one step m_hat = g and v_hat = g^2, so the update is lr*g/(|g|+eps).
  Parameter p("p", Tensor2::from_rows({{1.0, -2.0}}));
  p.grad = Tensor2::from_rows({{0.5, -3.0}});
  AdamConfig cfg;
  cfg.lr = 0.1;
  adam_step(p, cfg);
  EXPECT_NEAR(p.value[0], 1.0 - 0.1 * 0.5 / (0.5 + 1e-8), 1e-15);
  EXPECT_NEAR(p.value[1], -2.0 + 0.1 * 3.0 / (3.0 + 1e-8), 1e-15);
  EXPECT_EQ(p.grad[0], 0.0);
  EXPECT_EQ(p.step, 1);
}

TEST(AdamTest, ThreeStepsAgainstDirectRecurrence) {
  AdamConfig cfg;
  cfg.lr = 0.01;
  cfg.l2 = 0.1;
  Parameter p("p", Tensor2(1, 1, 0.7));
  double x = 0.7, m = 0.0, v = 0.0;
  const double grads[3] = {0.3, -0.1, 0.25};
  for (int t = 1; t <= 3; ++t) {
    p.grad[0] = grads[t - 1];
    adam_step(p, cfg);
    const double g = grads[t - 1] + 0.1 * x;
    m = 0.9 * m + 0.1 * g;
    v = 0.999 * v + 0.001 * g * g;
    x -= 0.01 * (m / (1 - std::pow(0.9, t))) /
         (std::sqrt(v / (1 - std::pow(0.999, t))) + 1e-8);
  }
  EXPECT_NEAR(p.value[0], x, 1e-15);
}

TEST(AdamTest, LazyRowsLeaveOthersUntouched) {
  Parameter p("e", Tensor2::from_rows({{1, 1}, {2, 2}, {3, 3}}));
  p.grad = Tensor2::from_rows({{0.1, 0.1}, {0.5, 0.5}, {0.2, 0.2}});
  const std::vector<uint32_t> rows = {1};
  AdamConfig cfg;
  cfg.l2 = 1.0;
  adam_step_rows(p, rows, cfg);
  EXPECT_EQ(p.value(0, 0), 1.0);
  EXPECT_EQ(p.value(2, 1), 3.0);
  EXPECT_LT(p.value(1, 0), 2.0);
  EXPECT_EQ(p.m(0, 0), 0.0);
}

TEST(AdamTest, NonFiniteGradientRejectedWithoutUpdate) {
  Parameter p("p", Tensor2(1, 2, 1.0));
  p.grad[1] = std::nan("");
  EXPECT_THROW(adam_step(p, AdamConfig{}), NumericError);
  EXPECT_EQ(p.value[0], 1.0);
}

TEST(AdamTest, InvalidConfig) {
  AdamConfig cfg;
  cfg.beta1 = 1.0;
  EXPECT_THROW(validate(cfg), ConfigError);
}

TEST(GradCheckTest, AcceptsCorrectAndRejectsWrongGradient) {
  Parameter p("x", Tensor2::from_rows({{0.3, -1.2, 2.0}}));
  std::vector<Parameter*> params = {&p};
  auto loss = [&] {
    double s = 0.0;
    for (double v : p.value.values()) s += v * v * v;
    return s;
  };
  auto good = [&] {
    for (size_t i = 0; i < 3; ++i) p.grad[i] = 3 * p.value[i] * p.value[i];
  };
  auto bad = [&] {
    for (size_t i = 0; i < 3; ++i) p.grad[i] = 2 * p.value[i] * p.value[i];
  };
  EXPECT_TRUE(grad_check(loss, good, params).passed);
  EXPECT_FALSE(grad_check(loss, bad, params).passed);
  EXPECT_EQ(p.value[1], -1.2);
}

TEST(OpsTest, AffineIdentityAndZeroInput) {
  Rng rng(20);
  const Tensor2 x = random_tensor(3, 3, rng);
  const Tensor2 eye = Tensor2::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  expect_close(affine_forward(x, eye, Tensor2(1, 3)), x, 0);
  const Tensor2 b = Tensor2::from_rows({{1, -2, 3}});
  const Tensor2 y = affine_forward(Tensor2(2, 3), random_tensor(3, 3, rng), b);
  for (size_t r = 0; r < 2; ++r) {
    for (size_t c = 0; c < 3; ++c) EXPECT_EQ(y(r, c), b(0, c));
  }
}

TEST(OpsTest, ReluAllNegative) {
  const Tensor2 z = Tensor2::from_rows({{-3, -0.5}});
  expect_close(relu_forward(z), Tensor2(1, 2), 0);
  expect_close(relu_backward(z, Tensor2(1, 2, 1.0)), Tensor2(1, 2), 0);
}

TEST(OpsTest, ReluBackwardMatchesFiniteDifferencesAwayFromZero) {
  Rng rng(21);
  Tensor2 z = random_tensor(4, 6, rng);
  for (double& v : z.values()) {
    if (std::fabs(v) < 1e-4) v = 0.5;
  }
  const Tensor2 probe = random_tensor(4, 6, rng);
  auto f = [&] { return weighted_sum(relu_forward(z), probe); };
  expect_close(relu_backward(z, probe), numeric_grad(z, f), 1e-8);
}

TEST(OpsTest, LayerNormConstantRowAndZeroGamma) {
  const double eps = 1e-5;
  const Tensor2 z(1, 4, 3.7);
  const Tensor2 y = layernorm_forward(z, Tensor2(1, 4, 1.0), Tensor2(1, 4), eps);
  for (double v : y.values()) EXPECT_LE(std::fabs(v), std::sqrt(eps));
  Rng rng(22);
  const Tensor2 beta = random_tensor(1, 4, rng);
  const Tensor2 y0 =
      layernorm_forward(random_tensor(2, 4, rng), Tensor2(1, 4), beta, eps);
  for (size_t r = 0; r < 2; ++r) {
    for (size_t c = 0; c < 4; ++c) EXPECT_EQ(y0(r, c), beta(0, c));
  }
}

TEST(OpsTest, BceClampBound) {
  const std::vector<double> y = {1, 0};
  const Tensor2 p = Tensor2::from_rows({{1.0}, {0.0}});
  EXPECT_LE(bce_loss(p, y).loss, -std::log(1.0 - kProbClamp) + 1e-15);
}

TEST(AdamTest, ZeroGradientLeavesValue) {
  Parameter p("p", Tensor2::from_rows({{0.25, -4.0}}));
  adam_step(p, AdamConfig{});
  EXPECT_EQ(p.value[0], 0.25);
  EXPECT_EQ(p.value[1], -4.0);
}

TEST(AdamTest, SingleStepExample) {
  Parameter p("p", Tensor2(1, 1, 0.0));
  p.grad[0] = 0.1;
  adam_step(p, AdamConfig{});
  EXPECT_NEAR(p.value[0], -1e-3 * 0.1 / (0.1 + 1e-8), 1e-18);
}

TEST(AdamTest, ConstantGradientStepApproachesLearningRate) {
  Parameter p("p", Tensor2(1, 1, 0.0));
  AdamConfig cfg;
  cfg.lr = 0.01;
  double prev = 0.0;
  for (int t = 0; t < 5000; ++t) {
    p.grad[0] = 0.3;
    adam_step(p, cfg);
    if (t < 4999) prev = p.value[0];
  }
  EXPECT_NEAR(prev - p.value[0], 0.01, 1e-6);
}

TEST(OpsTest, XavierSquareBoundAndVariance) {
  EXPECT_DOUBLE_EQ(xavier_bound(3, 3), 1.0);
  Rng rng(23);
  const Tensor2 w = xavier_init(400, 250, rng);
  const double bound = xavier_bound(400, 250);
  double s2 = 0.0;
  for (double v : w.values()) s2 += v * v;
  EXPECT_NEAR(s2 / w.size() / (bound * bound / 3.0), 1.0, 0.05);
}

TEST(GradCheckTest, LinearFunctionExact) {
  Parameter p("w", Tensor2(1, 1, 2.0));
  std::vector<Parameter*> params = {&p};
  const auto report = grad_check([&] { return 3.0 * p.value[0] + 1.0; },
                                 [&] { p.grad[0] = 3.0; }, params);
  EXPECT_LT(report.max_rel_error, 1e-9);
}

TEST(GradCheckTest, NonFiniteLossRaises) {
  Parameter p("w", Tensor2(1, 1, 0.0));
  std::vector<Parameter*> params = {&p};
  EXPECT_THROW(grad_check([&] { return std::log(p.value[0] - 1.0); },
                          [&] { p.grad[0] = 0.0; }, params),
               NumericError);
}

}  // namespace
}  // namespace optinter::numcore
