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

#ifndef OPTINTER_MODEL_COMBINATION_H_
#define OPTINTER_MODEL_COMBINATION_H_

#include <span>
#include <vector>

#include "optinter/datakit/schema.h"
#include "optinter/model/architecture.h"
#include "optinter/numcore/tensor.h"

namespace optinter::model {

using numcore::Tensor2;

// Shapes shared by the combination block. Batches are laid out as
//   eo: [B x M*s1]   original embeddings, field-major
//   em: [B x P*s2]   cross-product embeddings, canonical pair order
struct CombinationLayout {
  size_t num_fields = 0;
  size_t s1 = 0;
  size_t s2 = 0;
  std::vector<datakit::FieldPair> pairs;

  static CombinationLayout make(size_t num_fields, size_t s1, size_t s2);
  size_t num_pairs() const { return pairs.size(); }
  size_t padded_width() const { return s1 > s2 ? s1 : s2; }
};

// Element-wise product. Throws ShapeError on length mismatch.
std::vector<double> hadamard(std::span<const double> a,
                             std::span<const double> b);

// Row-wise softmax of (log_alpha + gumbel) / tau over the three methods.
// `gumbel` may be null (deterministic relaxation). Throws DomainError for
// tau <= 0.
Tensor2 relaxed_probabilities(const Tensor2& log_alpha, double tau,
                              const Tensor2* gumbel);

// e^b for the search stage: per pair, p_m * pad(e^m) + p_f * pad(e^o_i (x)
// e^o_j) + p_n * 0, every candidate zero-padded to max(s1, s2).
// Output [B x P*max(s1,s2)].
Tensor2 combination_relaxed(const Tensor2& eo, const Tensor2& em,
                            const Tensor2& probs,
                            const CombinationLayout& layout);

struct RelaxedCombinationGrads {
  Tensor2 deo;
  Tensor2 dem;
  Tensor2 dlog_alpha;  // [P x 3]
};

// Backward of combination_relaxed, with the architecture gradient taken
// through the softmax that produced `probs` at temperature `tau`.
RelaxedCombinationGrads combination_relaxed_backward(
    const Tensor2& deb, const Tensor2& eo, const Tensor2& em,
    const Tensor2& probs, double tau, const CombinationLayout& layout);

// Width of the fixed-architecture e^b: s2 per memorized pair, s1 per
// factorized pair, nothing for naive pairs.
size_t fixed_width(const ArchitectureDecision& decision,
                   const CombinationLayout& layout);

// e^b for retraining: concatenation of the selected embeddings in pair order.
Tensor2 combination_fixed(const Tensor2& eo, const Tensor2& em,
                          const ArchitectureDecision& decision,
                          const CombinationLayout& layout);

struct FixedCombinationGrads {
  Tensor2 deo;
  Tensor2 dem;
};

FixedCombinationGrads combination_fixed_backward(
    const Tensor2& deb, const Tensor2& eo,
    const ArchitectureDecision& decision, const CombinationLayout& layout);

}  // namespace optinter::model

#endif  // OPTINTER_MODEL_COMBINATION_H_
