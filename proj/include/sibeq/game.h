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

#ifndef SIBEQ_GAME_H_
#define SIBEQ_GAME_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sibeq {

// Tolerance for internal stochasticity invariants.
inline constexpr double kInternalTolerance = 1e-12;
// Tolerance applied to probabilities supplied by the user.
inline constexpr double kUserTolerance = 1e-9;

using LabelSet = std::vector<std::string>;

// Mixed-radix index over a product of finite sets. Component 0 is the most
// significant digit.
class JointIndex {
 public:
  JointIndex() = default;
  explicit JointIndex(std::vector<int> radices);

  int num_components() const { return static_cast<int>(radices_.size()); }
  int radix(int k) const { return radices_[k]; }
  const std::vector<int>& radices() const { return radices_; }
  int64_t size() const { return size_; }
  int64_t stride(int k) const { return strides_[k]; }

  int64_t Encode(std::span<const int> digits) const;
  void Decode(int64_t index, std::span<int> digits) const;
  std::vector<int> Decode(int64_t index) const;
  int Component(int64_t index, int k) const {
    return static_cast<int>((index / strides_[k]) % radices_[k]);
  }

 private:
  std::vector<int> radices_;
  std::vector<int64_t> strides_;
  int64_t size_ = 1;
};

// Dense row-stochastic table.
class Kernel {
 public:
  Kernel() = default;
  Kernel(int rows, int cols) : rows_(rows), cols_(cols), p_(rows * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double operator()(int r, int c) const { return p_[r * cols_ + c]; }
  double& operator()(int r, int c) { return p_[r * cols_ + c]; }
  std::span<const double> Row(int r) const {
    return {p_.data() + static_cast<size_t>(r) * cols_,
            static_cast<size_t>(cols_)};
  }
  std::span<double> MutableRow(int r) {
    return {p_.data() + static_cast<size_t>(r) * cols_,
            static_cast<size_t>(cols_)};
  }
  const std::vector<double>& data() const { return p_; }

  bool operator==(const Kernel&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> p_;
};

// A finite-horizon stochastic game with private and common observations.
// Times are 0-based internally; files and reports use 1-based times.
//
// Observation rows are keyed by (x_t, a_{t-1}); at t = 0 there is a single
// null previous action. Observation columns are the joint outcome
// (z_t, y_t^1, ..., y_t^N) encoded by ObsIndex(t).
struct FiniteGame {
  int horizon = 0;
  std::vector<std::string> agents;
  std::vector<LabelSet> states;                  // [t]
  std::vector<std::vector<LabelSet>> actions;    // [t][i]
  std::vector<std::vector<LabelSet>> private_obs;  // [t][i]
  std::vector<LabelSet> common_obs;              // [t]
  std::vector<double> initial;                   // over states[0]
  // [t] for t < horizon - 1; row x * |A_t| + a, column x'.
  std::vector<Kernel> transition;
  // [t]; row x * |A_{t-1}| + a_prev, column ObsIndex(t).Encode({z, y...}).
  std::vector<Kernel> observation;
  // [t][i][x * |A_t| + a].
  std::vector<std::vector<std::vector<double>>> utility;

  int num_agents() const { return static_cast<int>(agents.size()); }
  int NumStates(int t) const { return static_cast<int>(states[t].size()); }
  int NumActions(int t, int i) const {
    return static_cast<int>(actions[t][i].size());
  }
  int NumPrivateObs(int t, int i) const {
    return static_cast<int>(private_obs[t][i].size());
  }
  int NumCommonObs(int t) const {
    return static_cast<int>(common_obs[t].size());
  }
  // Joint action count at t; 1 for t < 0.
  int NumJointActions(int t) const;
  int NumJointObs(int t) const;

  JointIndex ActionIndex(int t) const;
  // Joint observation index (z, y^1, ..., y^N).
  JointIndex ObsIndex(int t) const;

  // Row of observation[t] for state x and previous joint action a_prev.
  int ObsRow(int t, int x, int a_prev) const {
    return x * (t == 0 ? 1 : NumJointActions(t - 1)) + a_prev;
  }
  double Utility(int t, int i, int x, int a) const {
    return utility[t][i][x * NumJointActions(t) + a];
  }

  bool operator==(const FiniteGame&) const = default;
};

// Checks shapes, non-empty sets, label uniqueness, and row sums. Rows within
// kUserTolerance of one are renormalized; the returned game satisfies all
// invariants to kInternalTolerance.
FiniteGame ValidateGame(FiniteGame game);

// Distribution of (x_{t+1}, z_{t+1}, y_{t+1}) given (x_t, a_t). Entry
// x' * NumJointObs(t + 1) + o.
std::vector<double> JointStepKernel(const FiniteGame& game, int t, int x,
                                    int a);

// Builds the joint observation kernel from independent private and common
// parts. private_parts[i] and common_part have rows ObsRow(t, ., .).
Kernel ProductObservationKernel(const FiniteGame& game, int t,
                                const std::vector<Kernel>& private_parts,
                                const Kernel& common_part);

}  // namespace sibeq

#endif  // SIBEQ_GAME_H_
