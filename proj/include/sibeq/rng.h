// Copyright 2026 The sibeq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIBEQ_RNG_H_
#define SIBEQ_RNG_H_

#include <cstdint>
#include <random>
#include <span>

namespace sibeq {

using Rng = std::mt19937_64;

// Uniform in [0, 1). Spelled out so results do not depend on the standard
// library's distribution implementations.
inline double UniformDouble(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int UniformInt(Rng& rng, int n) {
  return static_cast<int>(UniformDouble(rng) * n);
}

// Draws an index from an unnormalized nonnegative weight vector.
inline int SampleIndex(Rng& rng, std::span<const double> weights) {
  double total = 0;
  for (double w : weights) total += w;
  double u = UniformDouble(rng) * total;
  int last = -1;
  for (int k = 0; k < static_cast<int>(weights.size()); ++k) {
    if (weights[k] <= 0) continue;
    last = k;
    if (u < weights[k]) return k;
    u -= weights[k];
  }
  return last;
}

}  // namespace sibeq

#endif  // SIBEQ_RNG_H_
