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

#include "optinter/model/mlp.h"

#include "optinter/errors.h"

namespace optinter::model {

Mlp::Mlp(size_t input_width, const std::vector<uint32_t>& hidden,
         bool layer_norm, double ln_eps, numcore::Rng& rng)
    : input_width_(input_width), layer_norm_(layer_norm), ln_eps_(ln_eps) {
  if (input_width == 0) throw ConfigError("mlp: input width must be >= 1");
  size_t width = input_width;
  for (size_t l = 0; l < hidden.size(); ++l) {
    const std::string prefix = "mlp." + std::to_string(l) + ".";
    HiddenLayer layer;
    layer.w = Parameter(prefix + "w", numcore::xavier_init(width, hidden[l], rng));
    layer.b = Parameter(prefix + "b", Tensor2(1, hidden[l]));
    if (layer_norm) {
      layer.gamma = Parameter(prefix + "gamma", Tensor2(1, hidden[l], 1.0));
      layer.beta = Parameter(prefix + "beta", Tensor2(1, hidden[l]));
    }
    hidden_.push_back(std::move(layer));
    width = hidden[l];
  }
  out_w_ = Parameter("mlp.out.w", numcore::xavier_init(width, 1, rng));
  out_b_ = Parameter("mlp.out.b", Tensor2(1, 1));
}

Tensor2 Mlp::forward(const Tensor2& x, MlpCache* cache) const {
  if (x.cols() != input_width_) {
    throw ShapeError("mlp: input has " + std::to_string(x.cols()) +
                     " columns, first layer expects " +
                     std::to_string(input_width_));
  }
  if (cache != nullptr) {
    cache->inputs.clear();
    cache->pre.clear();
    cache->activated.clear();
    cache->norms.assign(hidden_.size(), {});
  }
  Tensor2 a = x;
  for (size_t l = 0; l < hidden_.size(); ++l) {
    const HiddenLayer& layer = hidden_[l];
    Tensor2 z = numcore::affine_forward(a, layer.w.value, layer.b.value);
    Tensor2 r = numcore::relu_forward(z);
    Tensor2 next =
        layer_norm_
            ? numcore::layernorm_forward(r, layer.gamma.value, layer.beta.value,
                                         ln_eps_,
                                         cache ? &cache->norms[l] : nullptr)
            : r;
    if (cache != nullptr) {
      cache->inputs.push_back(std::move(a));
      cache->pre.push_back(std::move(z));
      cache->activated.push_back(std::move(r));
    }
    a = std::move(next);
  }
  Tensor2 logit = numcore::affine_forward(a, out_w_.value, out_b_.value);
  if (cache != nullptr) cache->inputs.push_back(std::move(a));
  return logit;
}

Tensor2 Mlp::backward(const MlpCache& cache, const Tensor2& dlogit) {
  Tensor2 da;
  numcore::affine_backward_into(cache.inputs.back(), out_w_.value, dlogit, &da,
                                out_w_.grad, out_b_.grad);
  for (size_t l = hidden_.size(); l-- > 0;) {
    HiddenLayer& layer = hidden_[l];
    Tensor2 dr;
    if (layer_norm_) {
      numcore::layernorm_backward_into(da, cache.norms[l], layer.gamma.value, dr,
                                       layer.gamma.grad, layer.beta.grad);
    } else {
      dr = std::move(da);
    }
    Tensor2 dz = numcore::relu_backward(cache.pre[l], dr);
    Tensor2 dx;
    numcore::affine_backward_into(cache.inputs[l], layer.w.value, dz, &dx,
                                  layer.w.grad, layer.b.grad);
    da = std::move(dx);
  }
  return da;
}

std::vector<Parameter*> Mlp::parameters() {
  std::vector<Parameter*> out;
  for (auto& layer : hidden_) {
    out.push_back(&layer.w);
    out.push_back(&layer.b);
    if (layer_norm_) {
      out.push_back(&layer.gamma);
      out.push_back(&layer.beta);
    }
  }
  out.push_back(&out_w_);
  out.push_back(&out_b_);
  return out;
}

std::vector<const Parameter*> Mlp::parameters() const {
  std::vector<const Parameter*> out;
  for (Parameter* p : const_cast<Mlp*>(this)->parameters()) out.push_back(p);
  return out;
}

size_t Mlp::parameter_count() const {
  size_t n = 0;
  for (const Parameter* p : parameters()) n += p->size();
  return n;
}

size_t Mlp::count(size_t input_width, const std::vector<uint32_t>& hidden,
                  bool layer_norm) {
  size_t n = 0;
  size_t width = input_width;
  for (uint32_t h : hidden) {
    n += width * h + h;
    if (layer_norm) n += 2 * h;
    width = h;
  }
  return n + width + 1;
}

}  // namespace optinter::model
