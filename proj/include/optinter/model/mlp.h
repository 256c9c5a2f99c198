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

#ifndef OPTINTER_MODEL_MLP_H_
#define OPTINTER_MODEL_MLP_H_

#include <string>
#include <vector>

#include "optinter/numcore/adam.h"
#include "optinter/numcore/ops.h"
#include "optinter/numcore/rng.h"

namespace optinter::model {

using numcore::Parameter;
using numcore::Tensor2;

// Hidden layer a' = LN(relu(aW + b)), or relu(aW + b) without layer norm.
struct HiddenLayer {
  Parameter w;
  Parameter b;
  Parameter gamma;
  Parameter beta;
};

struct MlpCache {
  std::vector<Tensor2> inputs;      // a^(l) for every hidden layer and readout
  std::vector<Tensor2> pre;         // aW + b of every hidden layer
  std::vector<Tensor2> activated;   // relu output of every hidden layer
  std::vector<numcore::LayerNormCache> norms;
};

// Classifier: hidden LN-ReLU stack followed by an affine readout to one
// logit. An empty width list gives a pure affine readout.
class Mlp {
 public:
  Mlp() = default;
  Mlp(size_t input_width, const std::vector<uint32_t>& hidden,
      bool layer_norm, double ln_eps, numcore::Rng& rng);

  size_t input_width() const { return input_width_; }
  size_t depth() const { return hidden_.size(); }
  bool layer_norm() const { return layer_norm_; }

  // Throws ShapeError when x does not have input_width() columns.
  Tensor2 forward(const Tensor2& x, MlpCache* cache = nullptr) const;
  // Accumulates parameter gradients and returns dL/dx.
  Tensor2 backward(const MlpCache& cache, const Tensor2& dlogit);

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
  size_t parameter_count() const;

  // Exact count for a classifier with the given shape.
  static size_t count(size_t input_width, const std::vector<uint32_t>& hidden,
                      bool layer_norm);

  std::vector<HiddenLayer>& hidden() { return hidden_; }
  Parameter& readout_w() { return out_w_; }
  Parameter& readout_b() { return out_b_; }

 private:
  size_t input_width_ = 0;
  bool layer_norm_ = true;
  double ln_eps_ = 1e-5;
  std::vector<HiddenLayer> hidden_;
  Parameter out_w_;
  Parameter out_b_;
};

}  // namespace optinter::model

#endif  // OPTINTER_MODEL_MLP_H_
