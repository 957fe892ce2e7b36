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

#ifndef SIBEQ_STAGE_GAME_H_
#define SIBEQ_STAGE_GAME_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sibeq/belief.h"
#include "sibeq/compression.h"
#include "sibeq/game.h"
#include "sibeq/profile.h"

namespace sibeq {

// Continuation values at the children of a node: [z'][i][s'^i].
using ChildValues = std::vector<std::vector<std::vector<double>>>;

// Bayesian game played at one node of the belief tree. Agent i of type s^i
// holds the interim belief beliefs[i][s^i] over (x, s^-i) and receives
// payoff(i, x, s^i, a) = u_t^i(x, a) + E[V_{t+1}^i | x, s^i, a].
class StageGame {
 public:
  StageGame(const FiniteGame& game, const CompressionMaps& maps, int t,
            const CibBelief& belief, const ChildValues& children);

  int t() const { return t_; }
  int num_agents() const { return static_cast<int>(num_types_.size()); }
  int num_states() const { return num_states_; }
  int num_types(int i) const { return num_types_[i]; }
  int num_actions(int i) const { return actions_.radix(i); }
  const JointIndex& actions() const { return actions_; }
  const JointIndex& other_types(int i) const { return other_types_[i]; }

  // Interim belief of (i, s^i) over x * |S^-i| + o.
  const std::vector<double>& belief(int i, int s) const {
    return beliefs_[i][s];
  }
  // Probability of type s^i under the node belief of agent i.
  double type_mass(int i, int s) const { return type_mass_[i][s]; }
  // True if the type had zero mass and uses a uniform interim belief.
  bool zero_mass(int i, int s) const { return type_mass_[i][s] <= 1e-12; }
  double payoff(int i, int x, int s, int64_t a) const {
    return payoffs_[i][(static_cast<int64_t>(x) * num_types_[i] + s) *
                           actions_.size() +
                       a];
  }
  // Type of agent j (j != i) in the other-types index o of agent i.
  int OtherType(int i, int64_t o, int j) const {
    return other_digits_[i][o * num_agents() + j];
  }

  // R^i(s, a^i) for every a^i given everyone else's behavior in sigma.
  void InterimPayoffs(int i, int s, const StageStrategy& sigma,
                      std::span<double> out) const;
  double InterimValue(int i, int s, const StageStrategy& sigma) const;

  // Largest gain of a single type from a unilateral deviation.
  double Regret(const StageStrategy& sigma) const;
  // regrets[i][s].
  std::vector<std::vector<double>> TypeRegrets(
      const StageStrategy& sigma) const;

  StageStrategy UniformStrategy() const;
  std::string Describe(const FiniteGame& game,
                       const CompressionMaps& maps) const;

 private:
  int t_;
  int num_states_;
  std::vector<int> num_types_;
  JointIndex actions_;
  std::vector<JointIndex> other_types_;
  std::vector<std::vector<std::vector<double>>> beliefs_;
  std::vector<std::vector<double>> type_mass_;
  std::vector<std::vector<double>> payoffs_;
  std::vector<std::vector<int>> other_digits_;
};

// Agent-type where several actions are best responses at an equilibrium.
struct TieFlag {
  int agent = 0;
  int type = 0;
  std::vector<int> actions;
};

struct StageSolveOptions {
  double eps_br = 1e-9;
  int max_equilibria = 256;
  int64_t pure_cap = 100'000;
  // Two-agent support enumeration runs when the number of support
  // combinations is at most this; Lemke paths are used otherwise.
  int64_t support_cap = 20'000;
  int lemke_restarts = 6;
  int br_iterations = 2'000;
  double damping = 0.5;
  uint64_t seed = 7;
};

struct StageSolution {
  std::vector<StageStrategy> equilibria;
  std::vector<std::vector<TieFlag>> ties;  // per equilibrium
  bool truncated = false;  // more equilibria existed than were kept
};

// Best-response ties of sigma, within eps.
std::vector<TieFlag> FindTies(const StageGame& stage,
                              const StageStrategy& sigma, double eps);

// Finds Bayesian Nash equilibria of the stage game. Throws
// NoEquilibriumFound carrying the smallest regret seen if none is found.
StageSolution SolveStageBne(const StageGame& stage,
                            const StageSolveOptions& options = {});

// V_t^i(s^i) under sigma: values[i][s^i].
std::vector<std::vector<double>> ValueUpdate(const StageGame& stage,
                                             const StageStrategy& sigma);

}  // namespace sibeq

#endif  // SIBEQ_STAGE_GAME_H_
