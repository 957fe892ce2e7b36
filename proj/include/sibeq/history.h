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

#ifndef SIBEQ_HISTORY_H_
#define SIBEQ_HISTORY_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sibeq/game.h"
#include "sibeq/rng.h"

namespace sibeq {

inline constexpr int64_t kDefaultEnumerationCap = 10'000'000;

// Indexes private histories p_t^i = (y_0, a_0, ..., y_t) and common
// histories c_t = (z_0, ..., z_t) as mixed-radix integers:
//   p_{t+1} = (p_t * |A_t^i| + a_t) * |Y_{t+1}^i| + y_{t+1},
//   c_{t+1} = c_t * |Z_{t+1}| + z_{t+1}.
class HistorySpace {
 public:
  explicit HistorySpace(const FiniteGame& game);

  const FiniteGame& game() const { return *game_; }

  // Counts as doubles so callers can test against caps without overflow.
  double NumPrivate(int t, int i) const { return private_size_[t][i]; }
  double NumCommon(int t) const { return common_size_[t]; }
  // Same counts as integers; throws ExplosionError above the cap.
  int64_t PrivateCount(int t, int i,
                       int64_t cap = kDefaultEnumerationCap) const;
  int64_t CommonCount(int t, int64_t cap = kDefaultEnumerationCap) const;

  int64_t ExtendPrivate(int t, int i, int64_t p, int a, int y) const {
    return (p * game_->NumActions(t, i) + a) * game_->NumPrivateObs(t + 1, i) +
           y;
  }
  int64_t ExtendCommon(int t, int64_t c, int z) const {
    return c * game_->NumCommonObs(t + 1) + z;
  }
  int64_t PrivatePrefix(int t, int i, int64_t p) const {
    return p / game_->NumPrivateObs(t, i) / game_->NumActions(t - 1, i);
  }
  int LastPrivateObs(int t, int i, int64_t p) const {
    return static_cast<int>(p % game_->NumPrivateObs(t, i));
  }
  int LastAction(int t, int i, int64_t p) const {
    return static_cast<int>((p / game_->NumPrivateObs(t, i)) %
                            game_->NumActions(t - 1, i));
  }
  int64_t CommonPrefix(int t, int64_t c) const {
    return c / game_->NumCommonObs(t);
  }
  int LastCommonObs(int t, int64_t c) const {
    return static_cast<int>(c % game_->NumCommonObs(t));
  }

  // Observations y_0..y_t and actions a_0..a_{t-1} of a private history.
  void DecodePrivate(int t, int i, int64_t p, std::vector<int>* ys,
                     std::vector<int>* as) const;
  std::vector<int> DecodeCommon(int t, int64_t c) const;
  int64_t EncodeCommon(std::span<const int> zs) const;

  // Labels such as "y0|a0|y1" and "z0,z1".
  std::string PrivateLabel(int t, int i, int64_t p) const;
  std::string CommonLabel(int t, int64_t c) const;

 private:
  const FiniteGame* game_;
  std::vector<std::vector<double>> private_size_;
  std::vector<double> common_size_;
};

// Joint history h_t = (c_t, p_t^1, ..., p_t^N).
struct JointHistory {
  int64_t common = 0;
  std::vector<int64_t> priv;
  bool operator==(const JointHistory&) const = default;
};

// All joint histories at t in lexicographic (c, p^1, ..., p^N) order.
std::vector<JointHistory> EnumerateHistories(
    const HistorySpace& space, int t, int64_t cap = kDefaultEnumerationCap);

// A behavioral strategy of every agent as a function of its own private
// history and the common history. Fills probs with |A_t^i| weights.
using HistoryPolicy = std::function<void(int t, int agent, int64_t p,
                                         int64_t c, std::span<double> probs)>;

// Strategy tables over (p, c); unset entries are NaN.
class TabularHistoryPolicy {
 public:
  TabularHistoryPolicy() = default;
  TabularHistoryPolicy(const HistorySpace& space,
                       int64_t cap = kDefaultEnumerationCap);

  std::span<double> Mutable(int t, int i, int64_t p, int64_t c);
  std::span<const double> Get(int t, int i, int64_t p, int64_t c) const;
  bool Defined(int t, int i, int64_t p, int64_t c) const;
  HistoryPolicy AsPolicy() const;

 private:
  std::vector<std::vector<std::vector<double>>> tables_;  // [t][i]
  std::vector<std::vector<int>> num_actions_;
  std::vector<int64_t> num_common_;
};

// Uniformly random strategy on a probability grid of step 1/grid for agent
// `agent` only (other agents' entries are left undefined).
TabularHistoryPolicy RandomHistoryPolicy(const HistorySpace& space, int agent,
                                         int grid, Rng& rng,
                                         bool pure = false);

// Exact distribution of the world (x_t or x_{0:t}, c_t, p_t^1..p_t^N) at
// one time, stored densely in `mass` and indexed by `layout`, whose
// components are [state or state history, common, private of each agent].
struct WorldLayer {
  int t = 0;
  bool state_history = false;
  JointIndex layout;
  std::vector<double> mass;

  int State(int64_t w) const;
  int64_t StateHistory(int64_t w) const { return layout.Component(w, 0); }
  int64_t Common(int64_t w) const { return layout.Component(w, 1); }
  int64_t Private(int64_t w, int i) const {
    return layout.Component(w, i + 2);
  }
  int num_states_now = 0;
};

struct ForwardOptions {
  bool state_history = false;
  int64_t cap = kDefaultEnumerationCap;
  int last_t = -1;  // -1 means the horizon.
};

// Propagates the joint measure forward. Policy weights are used as given, so
// passing all-ones weights for one agent yields the measure used by
// full-history best-response recursions.
std::vector<WorldLayer> ForwardWorlds(const FiniteGame& game,
                                      const HistorySpace& space,
                                      const HistoryPolicy& policy,
                                      const ForwardOptions& options = {});

// Expected total utility of every agent.
std::vector<double> ExpectedTotalUtility(const FiniteGame& game,
                                         const HistorySpace& space,
                                         const HistoryPolicy& policy,
                                         int64_t cap = kDefaultEnumerationCap);

struct Trajectory {
  std::vector<int> states;                      // [t]
  std::vector<int> common_obs;                  // [t]
  std::vector<std::vector<int>> private_obs;    // [t][i]
  std::vector<std::vector<int>> actions;        // [t][i]
  std::vector<double> total_utility;            // [i]
};

// Samples one play. Throws UndefinedStrategyAtHistory when the policy
// returns something other than a distribution at a reached history.
Trajectory Simulate(const FiniteGame& game, const HistoryPolicy& policy,
                    uint64_t seed);
Trajectory Simulate(const FiniteGame& game, const HistoryPolicy& policy,
                    Rng& rng);

}  // namespace sibeq

#endif  // SIBEQ_HISTORY_H_
