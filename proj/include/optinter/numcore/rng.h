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

#ifndef OPTINTER_NUMCORE_RNG_H_
#define OPTINTER_NUMCORE_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace optinter::numcore {

// Seeded pseudo-random stream. The engine is mt19937_64, whose output
// sequence is fixed by the C++ standard; every distribution below is
// derived from raw engine output by hand so identical seeds give identical
// streams on every platform and standard library.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64";

  explicit Rng(uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  uint64_t seed() const { return seed_; }

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform();

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n must be positive.
  uint64_t uniform_int(uint64_t n);

  // Standard normal via Box-Muller.
  double normal();

  // Independent child stream keyed by `tag`; does not advance this stream.
  Rng fork(uint64_t tag) const;

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer, used for seed derivation.
uint64_t mix_seed(uint64_t x);

}  // namespace optinter::numcore

#endif  // OPTINTER_NUMCORE_RNG_H_
