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

#ifndef SIBEQ_COMPRESSION_H_
#define SIBEQ_COMPRESSION_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sibeq/game.h"
#include "sibeq/history.h"

namespace sibeq {

// Private-information compression: sets S_t^i, the recursive update phi and
// the history map zeta.
//
// phi[0][i] is indexed y * |Z_0| + z.
// phi[t][i] (t > 0) is indexed ((s * |Y_t^i| + y) * |Z_t| + z) * |A_{t-1}^i| + a.
// zeta[t][i] is indexed p * |C_t| + c.
struct CompressionMaps {
  std::vector<std::vector<LabelSet>> sets;             // [t][i]
  std::vector<std::vector<std::vector<int>>> phi;      // [t][i]
  std::vector<std::vector<std::vector<int>>> zeta;     // [t][i]

  int NumTypes(int t, int i) const {
    return static_cast<int>(sets[t][i].size());
  }
  // Joint type index (s^1, ..., s^N) at t.
  JointIndex TypeIndex(int t) const;
  // Joint type index of every agent other than i.
  JointIndex OtherTypeIndex(int t, int i) const;

  int Phi0(const FiniteGame& game, int i, int y, int z) const {
    return phi[0][i][y * game.NumCommonObs(0) + z];
  }
  int Phi(const FiniteGame& game, int t, int i, int s, int y, int z,
          int a) const {
    return phi[t][i][((s * game.NumPrivateObs(t, i) + y) *
                          game.NumCommonObs(t) +
                      z) *
                         game.NumActions(t - 1, i) +
                     a];
  }
  int Zeta(int t, int i, int64_t p, int64_t c, int64_t num_common) const {
    return zeta[t][i][p * num_common + c];
  }

  bool operator==(const CompressionMaps&) const = default;
};

// Size of the phi table domain at (t, i).
int64_t PhiDomainSize(const FiniteGame& game, const CompressionMaps& maps,
                      int t, int i);

// Identity compression: S_t^i is the set of private histories.
CompressionMaps IdentityCompression(const FiniteGame& game,
                                    int64_t cap = kDefaultEnumerationCap);

// Fills zeta by composing phi along every history.
void DeriveZetaFromPhi(const FiniteGame& game, CompressionMaps* maps,
                       int64_t cap = kDefaultEnumerationCap);
// The zeta implied by phi, without modifying maps.
std::vector<std::vector<std::vector<int>>> ZetaFromPhi(
    const FiniteGame& game, const CompressionMaps& maps,
    int64_t cap = kDefaultEnumerationCap);

// Checks set sizes, table shapes and that every entry is in range.
void ValidateCompression(const FiniteGame& game, const CompressionMaps& maps);

}  // namespace sibeq

#endif  // SIBEQ_COMPRESSION_H_
