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

#ifndef SIBEQ_VERIFICATION_H_
#define SIBEQ_VERIFICATION_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sibeq/belief.h"
#include "sibeq/compression.h"
#include "sibeq/game.h"
#include "sibeq/history.h"
#include "sibeq/profile.h"

namespace sibeq {

enum class BestResponseMode {
  // Enumerate pure history strategies when their count is within
  // strategy_cap, otherwise use backward induction.
  kAuto,
  // Enumerate every pure map from histories to actions.
  kEnumerate,
  // Backward induction over the agent's full-history information sets.
  kBackward,
};

struct BestResponseOptions {
  BestResponseMode mode = BestResponseMode::kAuto;
  double strategy_cap = 1 << 16;
  int64_t cap = kDefaultEnumerationCap;
  int workers = 1;
};

struct DeviationResult {
  int agent = 0;
  double best_value = 0;
  double equilibrium_value = 0;
  double gain = 0;
  // Pure history-indexed strategy attaining best_value.
  TabularHistoryPolicy argmax;
  double strategies_examined = 0;
  BestResponseMode mode_used = BestResponseMode::kBackward;
};

// Best response of `agent` over all history-dependent strategies while the
// others follow sigma.
DeviationResult BruteForceBestResponse(const FiniteGame& game,
                                       const CompressionMaps& maps,
                                       const SibProfile& sigma, int agent,
                                       const BestResponseOptions& options = {});

struct PomdpResult {
  double value = 0;
  // Optimal pure SIB strategy of the agent; other agents' tables are those
  // of sigma.
  SibProfile strategy;
  // values[t][node][s^i].
  std::vector<std::vector<std::vector<double>>> values;
};

// Dynamic program over the information state (S_t^i, node belief).
PomdpResult PomdpBestResponse(const FiniteGame& game,
                              const CompressionMaps& maps,
                              const SibProfile& sigma, const BeliefTree& tree,
                              int agent);

// Uniform deviation plus `samples` random deviations on a 1/grid mixing grid.
std::vector<TabularHistoryPolicy> SampleDeviations(const HistorySpace& space,
                                                   int agent, int samples,
                                                   int grid, uint64_t seed);

// Worst gap between the one-step law of (x~_{t+1}, y~_{t+1}) given the full
// past and given (x~_t, a_t^i), x~_t = (s_t, node belief, x_t), over the
// deviations of `agent`.
double CheckMarkovProperty(const FiniteGame& game, const CompressionMaps& maps,
                           const SibProfile& sigma, const BeliefTree& tree,
                           int agent,
                           const std::vector<TabularHistoryPolicy>& deviations,
                           int64_t cap = kDefaultEnumerationCap);

// Worst per-period gap between E[u~_t^i(x~_t, a_t^i)] and E[u_t^i(x_t, a_t)].
double CheckUtilityEquivalence(
    const FiniteGame& game, const CompressionMaps& maps,
    const SibProfile& sigma, int agent,
    const std::vector<TabularHistoryPolicy>& deviations,
    int64_t cap = kDefaultEnumerationCap);

// Worst gap between the private belief computed from the node belief and
// the exact posterior P(x_t, s_t^-i | h_t^i) under each deviation.
double CheckPrivateBeliefConsistency(
    const FiniteGame& game, const CompressionMaps& maps,
    const SibProfile& sigma, const BeliefTree& tree, int agent,
    const std::vector<TabularHistoryPolicy>& deviations,
    int64_t cap = kDefaultEnumerationCap);

struct Certification {
  bool certified = false;
  double max_gain = 0;
  double eps = 0;
  std::vector<DeviationResult> per_agent;
};

Certification Certify(const FiniteGame& game, const CompressionMaps& maps,
                      const SibProfile& sigma, double eps_bne,
                      const BestResponseOptions& options = {});

}  // namespace sibeq

#endif  // SIBEQ_VERIFICATION_H_
