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

#ifndef OPTINTER_NUMCORE_OPS_H_
#define OPTINTER_NUMCORE_OPS_H_

#include <span>

#include "optinter/numcore/rng.h"
#include "optinter/numcore/tensor.h"

namespace optinter::numcore {

// Probability clamp used inside every log-likelihood computation.
inline constexpr double kProbClamp = 1e-7;

// ---------------------------------------------------------------------------
// Affine map y = xW + b, with b broadcast over rows.

struct AffineGrads {
  Tensor2 dx;
  Tensor2 dw;
  Tensor2 db;
};

Tensor2 affine_forward(const Tensor2& x, const Tensor2& w, const Tensor2& b);
AffineGrads affine_backward(const Tensor2& x, const Tensor2& w,
                            const Tensor2& dy);

// Accumulating variant used by the layers: adds into dw and db, and writes
// (not adds) dx when it is non-null.
void affine_backward_into(const Tensor2& x, const Tensor2& w,
                          const Tensor2& dy, Tensor2* dx, Tensor2& dw,
                          Tensor2& db);

// ---------------------------------------------------------------------------
// ReLU.

Tensor2 relu_forward(const Tensor2& z);
// Gradient passes only where the forward input was strictly positive.
Tensor2 relu_backward(const Tensor2& z, const Tensor2& dy);

// ---------------------------------------------------------------------------
// Layer normalization over the feature axis of each row.

struct LayerNormCache {
  Tensor2 normalized;       // (z - mean) / sqrt(var + eps)
  std::vector<double> inv_std;
};

struct LayerNormGrads {
  Tensor2 dz;
  Tensor2 dgamma;
  Tensor2 dbeta;
};

Tensor2 layernorm_forward(const Tensor2& z, const Tensor2& gamma,
                          const Tensor2& beta, double eps,
                          LayerNormCache* cache = nullptr);
LayerNormGrads layernorm_backward(const Tensor2& dy,
                                  const LayerNormCache& cache,
                                  const Tensor2& gamma);
void layernorm_backward_into(const Tensor2& dy, const LayerNormCache& cache,
                             const Tensor2& gamma, Tensor2& dz,
                             Tensor2& dgamma, Tensor2& dbeta);

// ---------------------------------------------------------------------------
// Sigmoid head and binary cross-entropy.

double sigmoid(double x);
Tensor2 sigmoid(const Tensor2& x);

struct LossResult {
  double loss = 0.0;
  Tensor2 grad;  // same shape as the prediction input
};

// Mean BCE of probabilities (clamped to [kProbClamp, 1 - kProbClamp]) and
// its derivative with respect to the probabilities.
LossResult bce_loss(const Tensor2& probs, std::span<const double> labels);

// Mean BCE of sigmoid(logits). The gradient is the stable (p - y) / B form
// with respect to the logits.
LossResult bce_with_logits(const Tensor2& logits,
                           std::span<const double> labels);

// ---------------------------------------------------------------------------
// Initialization.

// I.i.d. uniform on [-sqrt(6/(n_in+n_out)), +sqrt(6/(n_in+n_out))], shaped
// [n_in x n_out].
Tensor2 xavier_init(size_t n_in, size_t n_out, Rng& rng);
double xavier_bound(size_t n_in, size_t n_out);

}  // namespace optinter::numcore

#endif  // OPTINTER_NUMCORE_OPS_H_
