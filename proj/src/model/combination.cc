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

#include "optinter/model/combination.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "optinter/errors.h"

namespace optinter::model {

CombinationLayout CombinationLayout::make(size_t num_fields, size_t s1,
                                          size_t s2) {
  return {num_fields, s1, s2, datakit::enumerate_pairs(num_fields)};
}

std::vector<double> hadamard(std::span<const double> a,
                             std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ShapeError("hadamard: lengths " + std::to_string(a.size()) + " and " +
                     std::to_string(b.size()));
  }
  std::vector<double> out(a.size());
  for (size_t t = 0; t < a.size(); ++t) out[t] = a[t] * b[t];
  return out;
}

Tensor2 relaxed_probabilities(const Tensor2& log_alpha, double tau,
                              const Tensor2* gumbel) {
  if (!(tau > 0.0)) throw DomainError("relaxation temperature must be > 0");
  if (log_alpha.cols() != kNumMethods) {
    throw ShapeError("architecture parameters must have 3 columns");
  }
  if (gumbel != nullptr && !gumbel->same_shape(log_alpha)) {
    throw ShapeError("gumbel noise shape mismatch");
  }
  Tensor2 probs(log_alpha.rows(), kNumMethods);
  for (size_t p = 0; p < log_alpha.rows(); ++p) {
    double y[kNumMethods];
    double peak = -INFINITY;
    for (size_t k = 0; k < kNumMethods; ++k) {
      y[k] = (log_alpha(p, k) + (gumbel ? (*gumbel)(p, k) : 0.0)) / tau;
      peak = std::max(peak, y[k]);
    }
    double total = 0.0;
    for (size_t k = 0; k < kNumMethods; ++k) {
      y[k] = std::exp(y[k] - peak);
      total += y[k];
    }
    for (size_t k = 0; k < kNumMethods; ++k) probs(p, k) = y[k] / total;
  }
  return probs;
}

namespace {

void check_inputs(const Tensor2& eo, const Tensor2& em,
                  const CombinationLayout& layout) {
  if (eo.cols() != layout.num_fields * layout.s1) {
    throw ShapeError("combination: e^o has " + std::to_string(eo.cols()) +
                     " columns, expected M*s1 = " +
                     std::to_string(layout.num_fields * layout.s1));
  }
  if (em.cols() != layout.num_pairs() * layout.s2 || em.rows() != eo.rows()) {
    throw ShapeError("combination: e^m shape " + em.shape_string() +
                     " does not match the layout");
  }
}

}  // namespace

Tensor2 combination_relaxed(const Tensor2& eo, const Tensor2& em,
                            const Tensor2& probs,
                            const CombinationLayout& layout) {
  check_inputs(eo, em, layout);
  numcore::require_shape(probs, layout.num_pairs(), kNumMethods,
                         "combination probabilities");
  const size_t d = layout.padded_width();
  const size_t s1 = layout.s1;
  const size_t s2 = layout.s2;
  Tensor2 eb(eo.rows(), layout.num_pairs() * d);
  for (size_t r = 0; r < eo.rows(); ++r) {
    const double* o = eo.row(r).data();
    const double* m = em.row(r).data();
    double* out = eb.row(r).data();
    for (size_t p = 0; p < layout.num_pairs(); ++p) {
      const double pm = probs(p, 0);
      const double pf = probs(p, 1);
      const double* ei = o + layout.pairs[p].first * s1;
      const double* ej = o + layout.pairs[p].second * s1;
      const double* mem = m + p * s2;
      double* dst = out + p * d;
      for (size_t t = 0; t < d; ++t) {
        const double cand_m = t < s2 ? mem[t] : 0.0;
        const double cand_f = t < s1 ? ei[t] * ej[t] : 0.0;
        dst[t] = pm * cand_m + pf * cand_f;
      }
    }
  }
  return eb;
}

RelaxedCombinationGrads combination_relaxed_backward(
    const Tensor2& deb, const Tensor2& eo, const Tensor2& em,
    const Tensor2& probs, double tau, const CombinationLayout& layout) {
  check_inputs(eo, em, layout);
  if (!(tau > 0.0)) throw DomainError("relaxation temperature must be > 0");
  const size_t d = layout.padded_width();
  const size_t s1 = layout.s1;
  const size_t s2 = layout.s2;
  const size_t np = layout.num_pairs();
  numcore::require_shape(deb, eo.rows(), np * d, "combination dE^b");

  RelaxedCombinationGrads g{Tensor2(eo.rows(), eo.cols()),
                            Tensor2(em.rows(), em.cols()),
                            Tensor2(np, kNumMethods)};
  // dL/dp_k summed over the batch; the naive candidate is zero so its
  // probability gradient is identically zero.
  Tensor2 dprob(np, kNumMethods);
  for (size_t r = 0; r < eo.rows(); ++r) {
    const double* o = eo.row(r).data();
    const double* m = em.row(r).data();
    const double* gb = deb.row(r).data();
    double* go = g.deo.row(r).data();
    double* gm = g.dem.row(r).data();
    for (size_t p = 0; p < np; ++p) {
      const size_t i = layout.pairs[p].first;
      const size_t j = layout.pairs[p].second;
      const double pm = probs(p, 0);
      const double pf = probs(p, 1);
      const double* ei = o + i * s1;
      const double* ej = o + j * s1;
      const double* src = gb + p * d;
      double dm = 0.0;
      double df = 0.0;
      for (size_t t = 0; t < s2; ++t) {
        gm[p * s2 + t] += pm * src[t];
        dm += src[t] * m[p * s2 + t];
      }
      for (size_t t = 0; t < s1; ++t) {
        const double gf = pf * src[t];
        go[i * s1 + t] += gf * ej[t];
        go[j * s1 + t] += gf * ei[t];
        df += src[t] * ei[t] * ej[t];
      }
      dprob(p, 0) += dm;
      dprob(p, 1) += df;
    }
  }
  for (size_t p = 0; p < np; ++p) {
    double mean = 0.0;
    for (size_t k = 0; k < kNumMethods; ++k) mean += probs(p, k) * dprob(p, k);
    for (size_t k = 0; k < kNumMethods; ++k) {
      g.dlog_alpha(p, k) = probs(p, k) * (dprob(p, k) - mean) / tau;
    }
  }
  return g;
}

size_t fixed_width(const ArchitectureDecision& decision,
                   const CombinationLayout& layout) {
  if (decision.num_pairs() != layout.num_pairs()) {
    throw ConfigError("decision covers " +
                      std::to_string(decision.num_pairs()) + " pairs, model has " +
                      std::to_string(layout.num_pairs()));
  }
  size_t width = 0;
  for (Method m : decision.methods()) {
    if (m == Method::kMemorize) width += layout.s2;
    if (m == Method::kFactorize) width += layout.s1;
  }
  return width;
}

Tensor2 combination_fixed(const Tensor2& eo, const Tensor2& em,
                          const ArchitectureDecision& decision,
                          const CombinationLayout& layout) {
  check_inputs(eo, em, layout);
  const size_t width = fixed_width(decision, layout);
  const size_t s1 = layout.s1;
  const size_t s2 = layout.s2;
  Tensor2 eb(eo.rows(), width);
  for (size_t r = 0; r < eo.rows(); ++r) {
    const double* o = eo.row(r).data();
    const double* m = em.row(r).data();
    double* out = eb.row(r).data();
    for (size_t p = 0; p < layout.num_pairs(); ++p) {
      switch (decision[p]) {
        case Method::kMemorize:
          std::copy_n(m + p * s2, s2, out);
          out += s2;
          break;
        case Method::kFactorize: {
          const double* ei = o + layout.pairs[p].first * s1;
          const double* ej = o + layout.pairs[p].second * s1;
          for (size_t t = 0; t < s1; ++t) out[t] = ei[t] * ej[t];
          out += s1;
          break;
        }
        case Method::kNaive:
          break;
      }
    }
  }
  return eb;
}

FixedCombinationGrads combination_fixed_backward(
    const Tensor2& deb, const Tensor2& eo,
    const ArchitectureDecision& decision, const CombinationLayout& layout) {
  const size_t width = fixed_width(decision, layout);
  numcore::require_shape(deb, eo.rows(), width, "combination dE^b");
  const size_t s1 = layout.s1;
  const size_t s2 = layout.s2;
  FixedCombinationGrads g{Tensor2(eo.rows(), eo.cols()),
                          Tensor2(eo.rows(), layout.num_pairs() * s2)};
  for (size_t r = 0; r < eo.rows(); ++r) {
    const double* o = eo.row(r).data();
    const double* src = deb.row(r).data();
    double* go = g.deo.row(r).data();
    double* gm = g.dem.row(r).data();
    for (size_t p = 0; p < layout.num_pairs(); ++p) {
      switch (decision[p]) {
        case Method::kMemorize:
          for (size_t t = 0; t < s2; ++t) gm[p * s2 + t] += src[t];
          src += s2;
          break;
        case Method::kFactorize: {
          const size_t i = layout.pairs[p].first;
          const size_t j = layout.pairs[p].second;
          for (size_t t = 0; t < s1; ++t) {
            go[i * s1 + t] += src[t] * o[j * s1 + t];
            go[j * s1 + t] += src[t] * o[i * s1 + t];
          }
          src += s1;
          break;
        }
        case Method::kNaive:
          break;
      }
    }
  }
  return g;
}

}  // namespace optinter::model
