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

#ifndef SIBEQ_BELIEF_H_
#define SIBEQ_BELIEF_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sibeq/compression.h"
#include "sibeq/game.h"
#include "sibeq/profile.h"

namespace sibeq {

// Conditioning events lighter than this are treated as infeasible.
inline constexpr double kFeasibilityThreshold = 1e-12;

// Common-information-based beliefs of all agents at one node:
// per_agent[i][x * |S_t| + s] with s the joint type index.
struct CibBelief {
  std::vector<std::vector<double>> per_agent;
};

// Belief to adopt after an infeasible common observation at (t, agent,
// node). Must return a distribution over X_t x S_t.
using FallbackRule =
    std::function<std::vector<double>(int t, int agent, int64_t node)>;

// Unnormalized first-period measure F_0 over (x, s, z), entry
// (x * |S_0| + s) * |Z_0| + z.
std::vector<double> InitialF(const FiniteGame& game,
                             const CompressionMaps& maps);

// One-step propagation of agent i's belief with i playing uniformly and
// everyone else following `sigma`. Entry (x' * |S_{t+1}| + s') * |Z_{t+1}|
// + z'.
std::vector<double> PropagateF(const FiniteGame& game,
                               const CompressionMaps& maps, int t, int agent,
                               std::span<const double> pi,
                               const StageStrategy& sigma);

struct BeliefNode {
  CibBelief belief;
  std::vector<double> mass;    // [i] probability of the conditioning event
  std::vector<bool> fallback;  // [i] true if the fallback rule was used
  bool AnyFallback() const;
};

// Conditions per-agent measures F[i] (layout as in PropagateF) on z.
BeliefNode ConditionOnCommonObs(const FiniteGame& game,
                                const CompressionMaps& maps, int t,
                                const std::vector<std::vector<double>>& f,
                                int z, int64_t node,
                                const FallbackRule& fallback = nullptr);

// Belief at t + 1 after observing z' (Bayes rule or the fallback).
BeliefNode UpdateBelief(const FiniteGame& game, const CompressionMaps& maps,
                        int t, const CibBelief& pi, const StageStrategy& sigma,
                        int z_next, int64_t child_node,
                        const FallbackRule& fallback = nullptr);

struct BeliefTreeOptions {
  FallbackRule fallback = nullptr;
  int64_t cap = kDefaultEnumerationCap;
  int last_t = -1;  // build levels 0..last_t; -1 means all
};

// Beliefs at every common history; levels[t][c].
struct BeliefTree {
  std::vector<std::vector<BeliefNode>> levels;

  int64_t NumNodes(int t) const {
    return static_cast<int64_t>(levels[t].size());
  }
  int FallbackCount() const;
};

BeliefTree BuildBeliefTree(const FiniteGame& game, const CompressionMaps& maps,
                           const SibProfile& profile,
                           const BeliefTreeOptions& options = {});

// Recomputes the levels after t from level t under `profile`.
void RebuildBeliefTreeFrom(const FiniteGame& game, const CompressionMaps& maps,
                           const SibProfile& profile, int t, BeliefTree* tree,
                           const BeliefTreeOptions& options = {});

// Groups the nodes of a level by their belief vectors (rounded to 1e-12):
// out[c] is the class of node c, classes numbered in order of first use.
std::vector<int> BeliefClasses(const std::vector<BeliefNode>& level);

// A profile stored per node may prescribe different stage strategies at
// nodes that share a belief, so it is not a function of (type, belief).
// Returns the profile in which every node copies the prescription of the
// first node of its class, resolving classes level by level because each
// change reshapes the beliefs after it. `tree`, if given, receives the
// belief tree of the result.
SibProfile BeliefMeasurableProfile(const FiniteGame& game,
                                   const CompressionMaps& maps,
                                   SibProfile profile,
                                   BeliefTree* tree = nullptr,
                                   const BeliefTreeOptions& options = {});

// Private belief of agent i of type s_i: pi(x, s_i, s_-i) normalized over
// (x, s_-i). Entry x * |S_-i| + o where o indexes OtherTypeIndex(t, i).
// Throws ZeroMarginalError if s_i has no mass.
std::vector<double> PrivateBelief(const FiniteGame& game,
                                  const CompressionMaps& maps, int t,
                                  int agent, std::span<const double> pi,
                                  int s_i);

// Marginal mass of each of agent i's types under pi.
std::vector<double> TypeMarginal(const FiniteGame& game,
                                 const CompressionMaps& maps, int t, int agent,
                                 std::span<const double> pi);

// Belief chain for games without common observations (|Z_t| = 1 for all t).
// Throws NotApplicable otherwise.
std::vector<BeliefNode> NoCommonObsChain(const FiniteGame& game,
                                         const CompressionMaps& maps,
                                         const SibProfile& profile);

}  // namespace sibeq

#endif  // SIBEQ_BELIEF_H_
