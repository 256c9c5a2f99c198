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
#include <vector>

#include "gtest/gtest.h"
#include "optinter/errors.h"
#include "optinter/metrics/metrics.h"
#include "optinter/metrics/ttest.h"
#include "optinter/numcore/rng.h"

namespace optinter::metrics {
namespace {

// O(n^2) pair counting: the definition of AUC with half credit for ties.
double auc_by_pairs(const std::vector<double>& s, const std::vector<double>& y) {
  double wins = 0.0, pairs = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (y[i] != 1.0) continue;
    for (size_t j = 0; j < s.size(); ++j) {
      if (y[j] != 0.0) continue;
      pairs += 1.0;
      if (s[i] > s[j]) wins += 1.0;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

TEST(AucTest, PerfectAndTied) {
  EXPECT_EQ(auc(std::vector<double>{0.9, 0.1}, std::vector<double>{1, 0}), 1.0);
  EXPECT_EQ(auc(std::vector<double>{0.1, 0.9}, std::vector<double>{1, 0}), 0.0);
  EXPECT_EQ(auc(std::vector<double>(6, 0.3),
                std::vector<double>{1, 0, 1, 0, 0, 1}),
            0.5);
}

TEST(AucTest, SingleClassIsUndefined) {
  EXPECT_THROW(auc(std::vector<double>{0.2, 0.4}, std::vector<double>{1, 1}),
               UndefinedMetricError);
  EXPECT_THROW(auc(std::vector<double>{0.2}, std::vector<double>{1, 0}),
               DomainError);
  EXPECT_THROW(auc(std::vector<double>{0.2, 0.1}, std::vector<double>{1, 2}),
               DomainError);
}

TEST(AucTest, MatchesPairCountingExactly) {
  numcore::Rng rng(1);
  int checked = 0;
  while (checked < 200) {
    std::vector<double> s(8), y(8);
    for (int i = 0; i < 8; ++i) {
      // Coarse grid so ties are common.
      s[i] = static_cast<double>(rng.uniform_int(5)) / 4.0;
      y[i] = static_cast<double>(rng.uniform_int(2));
    }
    double pos = 0;
    for (double v : y) pos += v;
    if (pos == 0 || pos == 8) continue;
    EXPECT_EQ(auc(s, y), auc_by_pairs(s, y));
    ++checked;
  }
}

TEST(AucTest, InvariantUnderMonotoneTransformAndComplement) {
  numcore::Rng rng(2);
  std::vector<double> s(50), y(50), t(50), flipped(50);
  for (int i = 0; i < 50; ++i) {
    s[i] = rng.uniform();
    y[i] = static_cast<double>(i % 3 == 0);
    t[i] = std::exp(3.0 * s[i]) - 7.0;
    flipped[i] = 1.0 - y[i];
  }
  EXPECT_EQ(auc(s, y), auc(t, y));
  EXPECT_NEAR(auc(s, y) + auc(s, flipped), 1.0, 1e-15);
}

TEST(LoglossTest, ClosedForms) {
  EXPECT_NEAR(logloss(std::vector<double>{0.5}, std::vector<double>{1}),
              std::log(2.0), 1e-15);
  EXPECT_NEAR(logloss(std::vector<double>{0.5, 0.5}, std::vector<double>{1, 0}),
              std::log(2.0), 1e-15);
}

TEST(LoglossTest, FiveInstancesByHand) {
  const std::vector<double> s = {0.9, 0.2, 0.6, 0.35, 0.99};
  const std::vector<double> y = {1, 0, 0, 1, 1};
  const double expected = -(std::log(0.9) + std::log(0.8) + std::log(0.4) +
                            std::log(0.35) + std::log(0.99)) /
                          5.0;
  EXPECT_NEAR(logloss(s, y), expected, 1e-12);
}

TEST(LoglossTest, ClampedAtExtremesAndMonotone) {
  const double l = logloss(std::vector<double>{0.0}, std::vector<double>{1});
  EXPECT_NEAR(l, -std::log(1e-7), 1e-9);
  EXPECT_LT(logloss(std::vector<double>{0.8}, std::vector<double>{1}),
            logloss(std::vector<double>{0.7}, std::vector<double>{1}));
}

TEST(EvalReportTest, JsonAndSummary) {
  const auto r = evaluate(std::vector<double>{0.9, 0.1, 0.6},
                          std::vector<double>{1, 0, 0}, "test", 42);
  EXPECT_EQ(r.auc, 1.0);
  EXPECT_EQ(r.n_instances, 3u);
  const auto back = EvalReport::from_json(r.to_json());
  EXPECT_EQ(back.auc, r.auc);
  EXPECT_EQ(back.logloss, r.logloss);
  EXPECT_EQ(back.param_count, 42u);
  EXPECT_EQ(r.summary().rfind("test: auc=1.000000", 0), 0u) << r.summary();
}

// Two-tailed tail mass of Student's t by composite Simpson integration of
// the density over [0, |t|].
double t_tail_by_quadrature(double t, double dof) {
  const double c = std::exp(std::lgamma((dof + 1) / 2) - std::lgamma(dof / 2)) /
                   std::sqrt(dof * M_PI);
  auto pdf = [&](double x) { return c * std::pow(1 + x * x / dof, -(dof + 1) / 2); };
  const int n = 20000;
  const double h = std::fabs(t) / n;
  double s = pdf(0) + pdf(std::fabs(t));
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * pdf(i * h);
  return 1.0 - 2.0 * s * h / 3.0;
}

const std::vector<double> kRunsA = {0.8012, 0.7998, 0.8031, 0.8005, 0.8020,
                                    0.8011, 0.7989, 0.8026, 0.8017, 0.8003};
const std::vector<double> kRunsB = {0.7991, 0.7990, 0.8010, 0.7999, 0.8001,
                                    0.8004, 0.7985, 0.8009, 0.8012, 0.7990};

TEST(TTestTest, FixedSampleMatchesReferenceValues) {
  const auto r = paired_t_test(kRunsA, kRunsB);
  EXPECT_EQ(r.n, 10u);
  EXPECT_EQ(r.dof, 9.0);
  // Reference statistic and p-value from an independent statistics package.
  EXPECT_NEAR(r.t, 5.555760908205858, 1e-9);
  EXPECT_NEAR(r.p_value, 0.00035379724678878100, 1e-10);
  EXPECT_NEAR(r.p_value, t_tail_by_quadrature(r.t, 9.0), 1e-6);
}

TEST(TTestTest, TailAgainstQuadratureAcrossDof) {
  for (double dof : {1.0, 2.0, 5.0, 9.0, 30.0}) {
    for (double t : {0.1, 0.5, 1.0, 2.0, 3.5}) {
      EXPECT_NEAR(student_t_two_tailed(t, dof), t_tail_by_quadrature(t, dof),
                  1e-7)
          << "t=" << t << " dof=" << dof;
    }
  }
  EXPECT_NEAR(student_t_two_tailed(2.0, 5.0), 0.10193947882985828, 1e-12);
  EXPECT_NEAR(incomplete_beta(2.5, 1.5, 0.3), 0.08894372317066562, 1e-12);
}

TEST(TTestTest, DegenerateCases) {
  const auto same = paired_t_test(kRunsA, kRunsA);
  EXPECT_EQ(same.p_value, 1.0);
  std::vector<double> shifted = kRunsA;
  for (double& v : shifted) v += 0.01;
  EXPECT_EQ(paired_t_test(shifted, kRunsA).p_value, 0.0);
  EXPECT_THROW(paired_t_test(std::vector<double>{1.0}, std::vector<double>{2.0}),
               DomainError);
  EXPECT_THROW(paired_t_test(kRunsA, std::vector<double>{1.0, 2.0}),
               DomainError);
}

TEST(TTestTest, SymmetricInArgumentOrder) {
  const auto ab = paired_t_test(kRunsA, kRunsB);
  const auto ba = paired_t_test(kRunsB, kRunsA);
  EXPECT_EQ(ab.p_value, ba.p_value);
  EXPECT_EQ(ab.t, -ba.t);
}

}  // namespace
}  // namespace optinter::metrics
