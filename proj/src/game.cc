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

#include "sibeq/game.h"

#include <cmath>
#include <set>
#include <string>

#include "sibeq/errors.h"

namespace sibeq {

JointIndex::JointIndex(std::vector<int> radices)
    : radices_(std::move(radices)), strides_(radices_.size()) {
  size_ = 1;
  for (int k = num_components() - 1; k >= 0; --k) {
    if (radices_[k] <= 0) throw ShapeMismatch("JointIndex: empty component");
    strides_[k] = size_;
    size_ *= radices_[k];
  }
}

int64_t JointIndex::Encode(std::span<const int> digits) const {
  if (static_cast<int>(digits.size()) != num_components()) {
    throw ShapeMismatch("JointIndex::Encode: wrong number of digits");
  }
  int64_t index = 0;
  for (int k = 0; k < num_components(); ++k) {
    if (digits[k] < 0 || digits[k] >= radices_[k]) {
      throw IndexOutOfRange("JointIndex::Encode: digit out of range");
    }
    index += digits[k] * strides_[k];
  }
  return index;
}

void JointIndex::Decode(int64_t index, std::span<int> digits) const {
  for (int k = 0; k < num_components(); ++k) {
    digits[k] = static_cast<int>((index / strides_[k]) % radices_[k]);
  }
}

std::vector<int> JointIndex::Decode(int64_t index) const {
  std::vector<int> digits(radices_.size());
  Decode(index, digits);
  return digits;
}

int FiniteGame::NumJointActions(int t) const {
  if (t < 0) return 1;
  int n = 1;
  for (int i = 0; i < num_agents(); ++i) n *= NumActions(t, i);
  return n;
}

int FiniteGame::NumJointObs(int t) const {
  int n = NumCommonObs(t);
  for (int i = 0; i < num_agents(); ++i) n *= NumPrivateObs(t, i);
  return n;
}

JointIndex FiniteGame::ActionIndex(int t) const {
  std::vector<int> radices(num_agents());
  for (int i = 0; i < num_agents(); ++i) radices[i] = NumActions(t, i);
  return JointIndex(std::move(radices));
}

JointIndex FiniteGame::ObsIndex(int t) const {
  std::vector<int> radices(num_agents() + 1);
  radices[0] = NumCommonObs(t);
  for (int i = 0; i < num_agents(); ++i) radices[i + 1] = NumPrivateObs(t, i);
  return JointIndex(std::move(radices));
}

namespace {

void CheckLabels(const LabelSet& set, const std::string& what) {
  if (set.empty()) throw EmptySetError(what + " is empty");
  std::set<std::string> seen;
  for (const auto& label : set) {
    if (label.empty()) throw ShapeMismatch(what + " has an empty label");
    if (!seen.insert(label).second) {
      throw ShapeMismatch(what + " repeats label '" + label + "'");
    }
  }
}

void NormalizeRow(std::span<double> row, const std::string& what) {
  double sum = 0;
  for (double& p : row) {
    if (!std::isfinite(p) || p < -kUserTolerance) {
      throw RowSumError(what + " has a negative or non-finite entry");
    }
    if (p < 0) p = 0;
    sum += p;
  }
  if (std::abs(sum - 1.0) > kUserTolerance) {
    throw RowSumError(what + " sums to " + std::to_string(sum));
  }
  // Rows already stochastic to working precision are kept bit-exact, which
  // makes validation idempotent.
  if (std::abs(sum - 1.0) <= kInternalTolerance) return;
  for (double& p : row) p /= sum;
}

void CheckKernel(Kernel& k, int rows, int cols, const std::string& what) {
  if (k.rows() != rows || k.cols() != cols) {
    throw ShapeMismatch(what + " has shape " + std::to_string(k.rows()) + "x" +
                        std::to_string(k.cols()) + ", expected " +
                        std::to_string(rows) + "x" + std::to_string(cols));
  }
  for (int r = 0; r < rows; ++r) {
    NormalizeRow(k.MutableRow(r), what + " row " + std::to_string(r));
  }
}

}  // namespace

FiniteGame ValidateGame(FiniteGame game) {
  const int T = game.horizon;
  if (T < 1) throw ShapeMismatch("horizon must be at least 1");
  CheckLabels(game.agents, "agent set");
  const int n = game.num_agents();
  if (static_cast<int>(game.states.size()) != T ||
      static_cast<int>(game.actions.size()) != T ||
      static_cast<int>(game.private_obs.size()) != T ||
      static_cast<int>(game.common_obs.size()) != T) {
    throw ShapeMismatch("per-time sets must have horizon entries");
  }
  for (int t = 0; t < T; ++t) {
    const std::string ts = " at t=" + std::to_string(t + 1);
    CheckLabels(game.states[t], "state set" + ts);
    CheckLabels(game.common_obs[t], "common observation set" + ts);
    if (static_cast<int>(game.actions[t].size()) != n ||
        static_cast<int>(game.private_obs[t].size()) != n) {
      throw ShapeMismatch("per-agent sets must have one entry per agent" + ts);
    }
    for (int i = 0; i < n; ++i) {
      CheckLabels(game.actions[t][i], "action set of " + game.agents[i] + ts);
      CheckLabels(game.private_obs[t][i],
                  "observation set of " + game.agents[i] + ts);
    }
  }
  if (static_cast<int>(game.initial.size()) != game.NumStates(0)) {
    throw ShapeMismatch("initial distribution has wrong size");
  }
  NormalizeRow(game.initial, "initial distribution");
  if (static_cast<int>(game.transition.size()) != T - 1) {
    throw ShapeMismatch("transition must have horizon - 1 kernels");
  }
  for (int t = 0; t + 1 < T; ++t) {
    CheckKernel(game.transition[t],
                game.NumStates(t) * game.NumJointActions(t),
                game.NumStates(t + 1),
                "transition at t=" + std::to_string(t + 1));
  }
  if (static_cast<int>(game.observation.size()) != T) {
    throw ShapeMismatch("observation must have horizon kernels");
  }
  for (int t = 0; t < T; ++t) {
    CheckKernel(game.observation[t],
                game.NumStates(t) * game.NumJointActions(t - 1),
                game.NumJointObs(t),
                "observation kernel at t=" + std::to_string(t + 1));
  }
  if (static_cast<int>(game.utility.size()) != T) {
    throw ShapeMismatch("utility must have horizon entries");
  }
  for (int t = 0; t < T; ++t) {
    if (static_cast<int>(game.utility[t].size()) != n) {
      throw ShapeMismatch("utility needs one table per agent");
    }
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(game.utility[t][i].size()) !=
          game.NumStates(t) * game.NumJointActions(t)) {
        throw ShapeMismatch("utility table of " + game.agents[i] +
                            " has wrong size at t=" + std::to_string(t + 1));
      }
      for (double u : game.utility[t][i]) {
        if (!std::isfinite(u)) throw ShapeMismatch("non-finite utility");
      }
    }
  }
  return game;
}

std::vector<double> JointStepKernel(const FiniteGame& game, int t, int x,
                                    int a) {
  if (t < 0 || t + 1 >= game.horizon) {
    throw IndexOutOfRange("JointStepKernel: no step after the last period");
  }
  if (x < 0 || x >= game.NumStates(t) || a < 0 ||
      a >= game.NumJointActions(t)) {
    throw IndexOutOfRange("JointStepKernel: state or action out of range");
  }
  const int nx = game.NumStates(t + 1);
  const int no = game.NumJointObs(t + 1);
  std::vector<double> out(static_cast<size_t>(nx) * no, 0.0);
  const int row = x * game.NumJointActions(t) + a;
  for (int xn = 0; xn < nx; ++xn) {
    const double px = game.transition[t](row, xn);
    if (px == 0) continue;
    auto obs = game.observation[t + 1].Row(game.ObsRow(t + 1, xn, a));
    for (int o = 0; o < no; ++o) out[xn * no + o] = px * obs[o];
  }
  return out;
}

Kernel ProductObservationKernel(const FiniteGame& game, int t,
                                const std::vector<Kernel>& private_parts,
                                const Kernel& common_part) {
  const int rows = game.NumStates(t) * game.NumJointActions(t - 1);
  const JointIndex obs = game.ObsIndex(t);
  Kernel k(rows, static_cast<int>(obs.size()));
  std::vector<int> digits(obs.num_components());
  for (int r = 0; r < rows; ++r) {
    for (int64_t o = 0; o < obs.size(); ++o) {
      obs.Decode(o, digits);
      double p = common_part(r, digits[0]);
      for (int i = 0; i < game.num_agents() && p != 0; ++i) {
        p *= private_parts[i](r, digits[i + 1]);
      }
      k(r, static_cast<int>(o)) = p;
    }
  }
  return k;
}

}  // namespace sibeq
