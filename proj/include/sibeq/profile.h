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

#ifndef SIBEQ_PROFILE_H_
#define SIBEQ_PROFILE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "sibeq/compression.h"
#include "sibeq/game.h"
#include "sibeq/history.h"
#include "sibeq/rng.h"

namespace sibeq {

// Type-contingent behavior of every agent at one node:
// tables[i][s * num_actions[i] + a] = sigma^i(a | s).
struct StageStrategy {
  std::vector<int> num_actions;
  std::vector<int> num_types;
  std::vector<std::vector<double>> tables;

  int num_agents() const { return static_cast<int>(tables.size()); }
  double Prob(int i, int s, int a) const {
    return tables[i][s * num_actions[i] + a];
  }
  double& MutableProb(int i, int s, int a) {
    return tables[i][s * num_actions[i] + a];
  }
  std::span<const double> Row(int i, int s) const {
    return {tables[i].data() + static_cast<size_t>(s) * num_actions[i],
            static_cast<size_t>(num_actions[i])};
  }
  std::span<double> MutableRow(int i, int s) {
    return {tables[i].data() + static_cast<size_t>(s) * num_actions[i],
            static_cast<size_t>(num_actions[i])};
  }

  bool operator==(const StageStrategy&) const = default;
};

StageStrategy UniformStageStrategy(const FiniteGame& game,
                                   const CompressionMaps& maps, int t);

// Largest absolute difference between two stage strategies.
double StageDistance(const StageStrategy& a, const StageStrategy& b);

// Convex combination (1 - eta) a + eta b.
StageStrategy MixStage(const StageStrategy& a, const StageStrategy& b,
                       double eta);

// SIB strategy profile: stages[t][c] is the stage strategy at common history
// c (the node of the belief tree).
struct SibProfile {
  std::vector<std::vector<StageStrategy>> stages;

  int horizon() const { return static_cast<int>(stages.size()); }
  bool operator==(const SibProfile&) const = default;
};

SibProfile UniformProfile(const FiniteGame& game, const CompressionMaps& maps,
                          int64_t cap = kDefaultEnumerationCap);

// Random profile; rows are uniform on the simplex, or point masses if pure.
SibProfile RandomProfile(const FiniteGame& game, const CompressionMaps& maps,
                         Rng& rng, bool pure = false,
                         int64_t cap = kDefaultEnumerationCap);

double ProfileDistance(const SibProfile& a, const SibProfile& b);

// Checks shapes and that every row is a distribution.
void ValidateProfile(const FiniteGame& game, const CompressionMaps& maps,
                     const SibProfile& profile);

// Full-history view of a SIB profile: agent i at (p, c) plays
// sigma_t^i(. | zeta(p, c)) at node c. The returned policy keeps references
// to all three arguments.
HistoryPolicy SibHistoryPolicy(const FiniteGame& game,
                               const CompressionMaps& maps,
                               const SibProfile& profile);

// Agent `agent` follows `own`, everyone else follows `others`.
HistoryPolicy CombinePolicies(int agent, HistoryPolicy own,
                              HistoryPolicy others);

}  // namespace sibeq

#endif  // SIBEQ_PROFILE_H_
