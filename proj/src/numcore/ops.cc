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

#include "optinter/numcore/ops.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "optinter/errors.h"

namespace optinter::numcore {

Tensor2 affine_forward(const Tensor2& x, const Tensor2& w, const Tensor2& b) {
  if (x.cols() != w.rows()) {
    throw ShapeError("affine_forward: x " + x.shape_string() +
                     " incompatible with W " + w.shape_string());
  }
  require_shape(b, 1, w.cols(), "affine_forward bias");
  const size_t n_in = w.rows();
  const size_t n_out = w.cols();
  Tensor2 y(x.rows(), n_out);
  for (size_t r = 0; r < x.rows(); ++r) {
    double* out = y.row(r).data();
    const double* in = x.row(r).data();
    std::copy_n(b.values().data(), n_out, out);
    for (size_t k = 0; k < n_in; ++k) {
      const double xv = in[k];
      if (xv == 0.0) continue;
      const double* wk = w.row(k).data();
      for (size_t j = 0; j < n_out; ++j) out[j] += xv * wk[j];
    }
  }
  return y;
}

void affine_backward_into(const Tensor2& x, const Tensor2& w,
                          const Tensor2& dy, Tensor2* dx, Tensor2& dw,
                          Tensor2& db) {
  const size_t n_in = w.rows();
  const size_t n_out = w.cols();
  require_shape(dy, x.rows(), n_out, "affine_backward dy");
  require_shape(dw, n_in, n_out, "affine_backward dW");
  require_shape(db, 1, n_out, "affine_backward db");
  if (x.cols() != n_in) throw ShapeError("affine_backward: x/W mismatch");
  if (dx != nullptr && !dx->same_shape(x)) dx->resize(x.rows(), x.cols());

  double* dbv = db.values().data();
  for (size_t r = 0; r < x.rows(); ++r) {
    const double* g = dy.row(r).data();
    const double* in = x.row(r).data();
    for (size_t j = 0; j < n_out; ++j) dbv[j] += g[j];
    for (size_t k = 0; k < n_in; ++k) {
      const double xv = in[k];
      if (xv == 0.0) continue;
      double* dwk = dw.row(k).data();
      for (size_t j = 0; j < n_out; ++j) dwk[j] += xv * g[j];
    }
    if (dx != nullptr) {
      double* dxr = dx->row(r).data();
      for (size_t k = 0; k < n_in; ++k) {
        const double* wk = w.row(k).data();
        double acc = 0.0;
        for (size_t j = 0; j < n_out; ++j) acc += g[j] * wk[j];
        dxr[k] = acc;
      }
    }
  }
}

AffineGrads affine_backward(const Tensor2& x, const Tensor2& w,
                            const Tensor2& dy) {
  AffineGrads grads{Tensor2(x.rows(), x.cols()), Tensor2(w.rows(), w.cols()),
                    Tensor2(1, w.cols())};
  affine_backward_into(x, w, dy, &grads.dx, grads.dw, grads.db);
  return grads;
}

Tensor2 relu_forward(const Tensor2& z) {
  Tensor2 y = z;
  for (double& v : y.values()) v = v > 0.0 ? v : 0.0;
  return y;
}

Tensor2 relu_backward(const Tensor2& z, const Tensor2& dy) {
  if (!z.same_shape(dy)) throw ShapeError("relu_backward: shape mismatch");
  Tensor2 dz(z.rows(), z.cols());
  for (size_t i = 0; i < z.size(); ++i) dz[i] = z[i] > 0.0 ? dy[i] : 0.0;
  return dz;
}

Tensor2 layernorm_forward(const Tensor2& z, const Tensor2& gamma,
                          const Tensor2& beta, double eps,
                          LayerNormCache* cache) {
  if (!(eps > 0.0)) throw DomainError("layernorm: eps must be positive");
  const size_t n = z.cols();
  require_shape(gamma, 1, n, "layernorm gamma");
  require_shape(beta, 1, n, "layernorm beta");
  Tensor2 y(z.rows(), n);
  if (cache != nullptr) {
    cache->normalized.resize(z.rows(), n);
    cache->inv_std.assign(z.rows(), 0.0);
  }
  for (size_t r = 0; r < z.rows(); ++r) {
    const auto in = z.row(r);
    double mean = 0.0;
    for (double v : in) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : in) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    const double inv = 1.0 / std::sqrt(var + eps);
    auto out = y.row(r);
    for (size_t j = 0; j < n; ++j) {
      const double xhat = (in[j] - mean) * inv;
      if (cache != nullptr) cache->normalized(r, j) = xhat;
      out[j] = xhat * gamma[j] + beta[j];
    }
    if (cache != nullptr) cache->inv_std[r] = inv;
  }
  return y;
}

void layernorm_backward_into(const Tensor2& dy, const LayerNormCache& cache,
                             const Tensor2& gamma, Tensor2& dz,
                             Tensor2& dgamma, Tensor2& dbeta) {
  const Tensor2& xhat = cache.normalized;
  const size_t n = xhat.cols();
  require_shape(dy, xhat.rows(), n, "layernorm_backward dy");
  require_shape(dgamma, 1, n, "layernorm_backward dgamma");
  require_shape(dbeta, 1, n, "layernorm_backward dbeta");
  if (!dz.same_shape(dy)) dz.resize(dy.rows(), n);
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> dxhat(n);
  for (size_t r = 0; r < dy.rows(); ++r) {
    const auto g = dy.row(r);
    const auto xh = xhat.row(r);
    double sum_d = 0.0;
    double sum_dx = 0.0;
    for (size_t j = 0; j < n; ++j) {
      dgamma[j] += g[j] * xh[j];
      dbeta[j] += g[j];
      dxhat[j] = g[j] * gamma[j];
      sum_d += dxhat[j];
      sum_dx += dxhat[j] * xh[j];
    }
    const double inv = cache.inv_std[r];
    auto out = dz.row(r);
    for (size_t j = 0; j < n; ++j) {
      out[j] = inv * (dxhat[j] - inv_n * sum_d - xh[j] * inv_n * sum_dx);
    }
  }
}

LayerNormGrads layernorm_backward(const Tensor2& dy,
                                  const LayerNormCache& cache,
                                  const Tensor2& gamma) {
  LayerNormGrads grads{Tensor2(dy.rows(), dy.cols()), Tensor2(1, dy.cols()),
                       Tensor2(1, dy.cols())};
  layernorm_backward_into(dy, cache, gamma, grads.dz, grads.dgamma,
                          grads.dbeta);
  return grads;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Tensor2 sigmoid(const Tensor2& x) {
  Tensor2 y = x;
  for (double& v : y.values()) v = sigmoid(v);
  return y;
}

namespace {

void check_labels(const Tensor2& pred, std::span<const double> labels) {
  if (pred.cols() != 1 || pred.rows() != labels.size()) {
    throw ShapeError("bce: predictions " + pred.shape_string() +
                     " do not match " + std::to_string(labels.size()) +
                     " labels");
  }
  if (labels.empty()) throw DomainError("bce: empty batch");
  for (double y : labels) {
    if (y != 0.0 && y != 1.0) {
      throw DomainError("bce: label outside {0,1}: " + std::to_string(y));
    }
  }
}

double clamp_prob(double p) {
  return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}

}  // namespace

LossResult bce_loss(const Tensor2& probs, std::span<const double> labels) {
  check_labels(probs, labels);
  const double inv_b = 1.0 / static_cast<double>(labels.size());
  LossResult result{0.0, Tensor2(probs.rows(), 1)};
  for (size_t i = 0; i < labels.size(); ++i) {
    const double p = clamp_prob(probs[i]);
    const double y = labels[i];
    result.loss -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
    result.grad[i] = -(y / p - (1.0 - y) / (1.0 - p)) * inv_b;
  }
  result.loss *= inv_b;
  return result;
}

LossResult bce_with_logits(const Tensor2& logits,
                           std::span<const double> labels) {
  check_labels(logits, labels);
  const double inv_b = 1.0 / static_cast<double>(labels.size());
  LossResult result{0.0, Tensor2(logits.rows(), 1)};
  for (size_t i = 0; i < labels.size(); ++i) {
    const double p_raw = sigmoid(logits[i]);
    const double p = clamp_prob(p_raw);
    const double y = labels[i];
    result.loss -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
    result.grad[i] = (p_raw - y) * inv_b;
  }
  result.loss *= inv_b;
  return result;
}

double xavier_bound(size_t n_in, size_t n_out) {
  if (n_in == 0 || n_out == 0) {
    throw DomainError("xavier_init: dimensions must be positive");
  }
  return std::sqrt(6.0 / static_cast<double>(n_in + n_out));
}

Tensor2 xavier_init(size_t n_in, size_t n_out, Rng& rng) {
  const double bound = xavier_bound(n_in, n_out);
  Tensor2 w(n_in, n_out);
  for (double& v : w.values()) v = rng.uniform(-bound, bound);
  return w;
}

}  // namespace optinter::numcore
