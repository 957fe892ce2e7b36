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

#include "sibeq/history.h"

#include <cmath>
#include <string>

#include "sibeq/errors.h"

namespace sibeq {

HistorySpace::HistorySpace(const FiniteGame& game) : game_(&game) {
  const int T = game.horizon;
  const int n = game.num_agents();
  private_size_.assign(T, std::vector<double>(n));
  common_size_.assign(T, 0);
  for (int t = 0; t < T; ++t) {
    common_size_[t] = (t == 0 ? 1.0 : common_size_[t - 1]) *
                      game.NumCommonObs(t);
    for (int i = 0; i < n; ++i) {
      private_size_[t][i] =
          (t == 0 ? 1.0
                  : private_size_[t - 1][i] * game.NumActions(t - 1, i)) *
          game.NumPrivateObs(t, i);
    }
  }
}

int64_t HistorySpace::PrivateCount(int t, int i, int64_t cap) const {
  if (private_size_[t][i] > static_cast<double>(cap)) {
    throw ExplosionError("private histories of agent " + game_->agents[i] +
                             " at t=" + std::to_string(t + 1),
                         private_size_[t][i]);
  }
  return static_cast<int64_t>(private_size_[t][i]);
}

int64_t HistorySpace::CommonCount(int t, int64_t cap) const {
  if (common_size_[t] > static_cast<double>(cap)) {
    throw ExplosionError("common histories at t=" + std::to_string(t + 1),
                         common_size_[t]);
  }
  return static_cast<int64_t>(common_size_[t]);
}

void HistorySpace::DecodePrivate(int t, int i, int64_t p, std::vector<int>* ys,
                                 std::vector<int>* as) const {
  ys->assign(t + 1, 0);
  as->assign(t, 0);
  for (int k = t; k >= 0; --k) {
    (*ys)[k] = LastPrivateObs(k, i, p);
    if (k > 0) {
      (*as)[k - 1] = LastAction(k, i, p);
      p = PrivatePrefix(k, i, p);
    }
  }
}

std::vector<int> HistorySpace::DecodeCommon(int t, int64_t c) const {
  std::vector<int> zs(t + 1);
  for (int k = t; k >= 0; --k) {
    zs[k] = LastCommonObs(k, c);
    c = CommonPrefix(k, c);
  }
  return zs;
}

int64_t HistorySpace::EncodeCommon(std::span<const int> zs) const {
  int64_t c = 0;
  for (int k = 0; k < static_cast<int>(zs.size()); ++k) {
    if (zs[k] < 0 || zs[k] >= game_->NumCommonObs(k)) {
      throw IndexOutOfRange("common observation out of range");
    }
    c = c * game_->NumCommonObs(k) + zs[k];
  }
  return c;
}

std::string HistorySpace::PrivateLabel(int t, int i, int64_t p) const {
  std::vector<int> ys, as;
  DecodePrivate(t, i, p, &ys, &as);
  std::string out;
  for (int k = 0; k <= t; ++k) {
    if (k > 0) out += "|" + game_->actions[k - 1][i][as[k - 1]] + "|";
    out += game_->private_obs[k][i][ys[k]];
  }
  return out;
}

std::string HistorySpace::CommonLabel(int t, int64_t c) const {
  std::vector<int> zs = DecodeCommon(t, c);
  std::string out;
  for (int k = 0; k <= t; ++k) {
    if (k > 0) out += ",";
    out += game_->common_obs[k][zs[k]];
  }
  return out;
}

std::vector<JointHistory> EnumerateHistories(const HistorySpace& space, int t,
                                             int64_t cap) {
  const FiniteGame& game = space.game();
  const int n = game.num_agents();
  double total = space.NumCommon(t);
  for (int i = 0; i < n; ++i) total *= space.NumPrivate(t, i);
  if (total > static_cast<double>(cap)) {
    throw ExplosionError("joint histories at t=" + std::to_string(t + 1),
                         total);
  }
  std::vector<int> radices(n + 1);
  radices[0] = static_cast<int>(space.NumCommon(t));
  for (int i = 0; i < n; ++i) {
    radices[i + 1] = static_cast<int>(space.NumPrivate(t, i));
  }
  JointIndex index(radices);
  std::vector<JointHistory> out;
  out.reserve(index.size());
  std::vector<int> digits(n + 1);
  for (int64_t k = 0; k < index.size(); ++k) {
    index.Decode(k, digits);
    JointHistory h;
    h.common = digits[0];
    h.priv.assign(digits.begin() + 1, digits.end());
    out.push_back(std::move(h));
  }
  return out;
}

TabularHistoryPolicy::TabularHistoryPolicy(const HistorySpace& space,
                                           int64_t cap) {
  const FiniteGame& game = space.game();
  const int T = game.horizon;
  const int n = game.num_agents();
  tables_.resize(T);
  num_actions_.assign(T, std::vector<int>(n));
  num_common_.resize(T);
  double total = 0;
  for (int t = 0; t < T; ++t) {
    num_common_[t] = space.CommonCount(t, cap);
    tables_[t].resize(n);
    for (int i = 0; i < n; ++i) {
      num_actions_[t][i] = game.NumActions(t, i);
      const double size =
          space.NumPrivate(t, i) * space.NumCommon(t) * game.NumActions(t, i);
      total += size;
      if (total > static_cast<double>(cap)) {
        throw ExplosionError("history policy table", total);
      }
      tables_[t][i].assign(static_cast<size_t>(size),
                           std::numeric_limits<double>::quiet_NaN());
    }
  }
}

std::span<double> TabularHistoryPolicy::Mutable(int t, int i, int64_t p,
                                                int64_t c) {
  const int na = num_actions_[t][i];
  const size_t offset = static_cast<size_t>(p * num_common_[t] + c) * na;
  if (offset + na > tables_[t][i].size()) {
    throw IndexOutOfRange("history policy index out of range");
  }
  return {tables_[t][i].data() + offset, static_cast<size_t>(na)};
}

std::span<const double> TabularHistoryPolicy::Get(int t, int i, int64_t p,
                                                  int64_t c) const {
  const int na = num_actions_[t][i];
  const size_t offset = static_cast<size_t>(p * num_common_[t] + c) * na;
  if (offset + na > tables_[t][i].size()) {
    throw IndexOutOfRange("history policy index out of range");
  }
  return {tables_[t][i].data() + offset, static_cast<size_t>(na)};
}

bool TabularHistoryPolicy::Defined(int t, int i, int64_t p, int64_t c) const {
  for (double v : Get(t, i, p, c)) {
    if (std::isnan(v)) return false;
  }
  return true;
}

HistoryPolicy TabularHistoryPolicy::AsPolicy() const {
  return [this](int t, int i, int64_t p, int64_t c, std::span<double> probs) {
    auto row = Get(t, i, p, c);
    std::copy(row.begin(), row.end(), probs.begin());
  };
}

TabularHistoryPolicy RandomHistoryPolicy(const HistorySpace& space, int agent,
                                         int grid, Rng& rng, bool pure) {
  const FiniteGame& game = space.game();
  TabularHistoryPolicy policy(space);
  for (int t = 0; t < game.horizon; ++t) {
    const int na = game.NumActions(t, agent);
    const int64_t np = space.PrivateCount(t, agent);
    const int64_t nc = space.CommonCount(t);
    for (int64_t p = 0; p < np; ++p) {
      for (int64_t c = 0; c < nc; ++c) {
        auto row = policy.Mutable(t, agent, p, c);
        std::fill(row.begin(), row.end(), 0.0);
        if (pure || grid <= 1) {
          row[UniformInt(rng, na)] = 1.0;
          continue;
        }
        // Scatter `grid` units of mass uniformly over the actions.
        for (int u = 0; u < grid; ++u) row[UniformInt(rng, na)] += 1.0;
        for (double& v : row) v /= grid;
      }
    }
  }
  return policy;
}

int WorldLayer::State(int64_t w) const {
  const int64_t sh = layout.Component(w, 0);
  return state_history ? static_cast<int>(sh % num_states_now)
                       : static_cast<int>(sh);
}

namespace {

JointIndex LayerLayout(const FiniteGame& game, const HistorySpace& space,
                       int t, bool state_history, int64_t cap) {
  const int n = game.num_agents();
  double x_dim = game.NumStates(t);
  if (state_history) {
    x_dim = 1;
    for (int k = 0; k <= t; ++k) x_dim *= game.NumStates(k);
  }
  double total = x_dim * space.NumCommon(t);
  for (int i = 0; i < n; ++i) total *= space.NumPrivate(t, i);
  if (total > static_cast<double>(cap)) {
    throw ExplosionError("world distribution at t=" + std::to_string(t + 1),
                         total);
  }
  std::vector<int> radices(n + 2);
  radices[0] = static_cast<int>(x_dim);
  radices[1] = static_cast<int>(space.NumCommon(t));
  for (int i = 0; i < n; ++i) {
    radices[i + 2] = static_cast<int>(space.NumPrivate(t, i));
  }
  return JointIndex(std::move(radices));
}

}  // namespace

std::vector<WorldLayer> ForwardWorlds(const FiniteGame& game,
                                      const HistorySpace& space,
                                      const HistoryPolicy& policy,
                                      const ForwardOptions& options) {
  const int n = game.num_agents();
  const int last = options.last_t < 0 ? game.horizon - 1 : options.last_t;
  std::vector<WorldLayer> layers;
  layers.reserve(last + 1);

  WorldLayer first;
  first.t = 0;
  first.state_history = options.state_history;
  first.num_states_now = game.NumStates(0);
  first.layout = LayerLayout(game, space, 0, options.state_history,
                             options.cap);
  first.mass.assign(first.layout.size(), 0.0);
  {
    const JointIndex obs = game.ObsIndex(0);
    std::vector<int> od(obs.num_components());
    std::vector<int> wd(n + 2);
    for (int x = 0; x < game.NumStates(0); ++x) {
      if (game.initial[x] == 0) continue;
      auto row = game.observation[0].Row(game.ObsRow(0, x, 0));
      for (int64_t o = 0; o < obs.size(); ++o) {
        if (row[o] == 0) continue;
        obs.Decode(o, od);
        wd[0] = x;
        wd[1] = od[0];
        for (int i = 0; i < n; ++i) wd[i + 2] = od[i + 1];
        first.mass[first.layout.Encode(wd)] += game.initial[x] * row[o];
      }
    }
  }
  layers.push_back(std::move(first));

  std::vector<std::vector<double>> probs(n);
  std::vector<int> wd(n + 2), nd(n + 2), ad(n);
  for (int t = 0; t < last; ++t) {
    const WorldLayer& cur = layers.back();
    WorldLayer next;
    next.t = t + 1;
    next.state_history = options.state_history;
    next.num_states_now = game.NumStates(t + 1);
    next.layout = LayerLayout(game, space, t + 1, options.state_history,
                              options.cap);
    next.mass.assign(next.layout.size(), 0.0);
    const JointIndex actions = game.ActionIndex(t);
    const JointIndex obs = game.ObsIndex(t + 1);
    std::vector<std::vector<int>> obs_digits(obs.size());
    for (int64_t o = 0; o < obs.size(); ++o) obs_digits[o] = obs.Decode(o);
    const int nx = game.NumStates(t + 1);
    for (int i = 0; i < n; ++i) probs[i].resize(game.NumActions(t, i));

    for (int64_t w = 0; w < cur.layout.size(); ++w) {
      const double m = cur.mass[w];
      if (m == 0) continue;
      cur.layout.Decode(w, wd);
      const int x = cur.State(w);
      for (int i = 0; i < n; ++i) {
        policy(t, i, wd[i + 2], wd[1], probs[i]);
      }
      for (int64_t a = 0; a < actions.size(); ++a) {
        actions.Decode(a, ad);
        double wa = m;
        for (int i = 0; i < n && wa != 0; ++i) wa *= probs[i][ad[i]];
        if (wa == 0) continue;
        const int row = x * static_cast<int>(actions.size()) +
                        static_cast<int>(a);
        for (int xn = 0; xn < nx; ++xn) {
          const double px = game.transition[t](row, xn);
          if (px == 0) continue;
          auto orow = game.observation[t + 1].Row(
              game.ObsRow(t + 1, xn, static_cast<int>(a)));
          nd[0] = options.state_history ? wd[0] * nx + xn : xn;
          for (int64_t o = 0; o < obs.size(); ++o) {
            if (orow[o] == 0) continue;
            const auto& od = obs_digits[o];
            nd[1] = static_cast<int>(space.ExtendCommon(t, wd[1], od[0]));
            for (int i = 0; i < n; ++i) {
              nd[i + 2] = static_cast<int>(
                  space.ExtendPrivate(t, i, wd[i + 2], ad[i], od[i + 1]));
            }
            next.mass[next.layout.Encode(nd)] += wa * px * orow[o];
          }
        }
      }
    }
    layers.push_back(std::move(next));
  }
  return layers;
}

std::vector<double> ExpectedTotalUtility(const FiniteGame& game,
                                         const HistorySpace& space,
                                         const HistoryPolicy& policy,
                                         int64_t cap) {
  const int n = game.num_agents();
  ForwardOptions options;
  options.cap = cap;
  std::vector<WorldLayer> layers = ForwardWorlds(game, space, policy, options);
  std::vector<double> total(n, 0.0);
  std::vector<std::vector<double>> probs(n);
  std::vector<int> wd(n + 2), ad(n);
  for (const WorldLayer& layer : layers) {
    const int t = layer.t;
    const JointIndex actions = game.ActionIndex(t);
    for (int i = 0; i < n; ++i) probs[i].resize(game.NumActions(t, i));
    for (int64_t w = 0; w < layer.layout.size(); ++w) {
      const double m = layer.mass[w];
      if (m == 0) continue;
      layer.layout.Decode(w, wd);
      const int x = layer.State(w);
      for (int i = 0; i < n; ++i) policy(t, i, wd[i + 2], wd[1], probs[i]);
      for (int64_t a = 0; a < actions.size(); ++a) {
        actions.Decode(a, ad);
        double wa = m;
        for (int i = 0; i < n && wa != 0; ++i) wa *= probs[i][ad[i]];
        if (wa == 0) continue;
        for (int i = 0; i < n; ++i) {
          total[i] += wa * game.Utility(t, i, x, static_cast<int>(a));
        }
      }
    }
  }
  return total;
}

Trajectory Simulate(const FiniteGame& game, const HistoryPolicy& policy,
                    uint64_t seed) {
  Rng rng(seed);
  return Simulate(game, policy, rng);
}

Trajectory Simulate(const FiniteGame& game, const HistoryPolicy& policy,
                    Rng& rng) {
  const HistorySpace space(game);
  const int n = game.num_agents();
  const int T = game.horizon;
  Trajectory traj;
  traj.total_utility.assign(n, 0.0);
  std::vector<int64_t> p(n, 0);
  int64_t c = 0;

  int x = SampleIndex(rng, game.initial);
  int prev_a = 0;
  std::vector<double> probs;
  for (int t = 0; t < T; ++t) {
    const JointIndex obs = game.ObsIndex(t);
    const int o =
        SampleIndex(rng, game.observation[t].Row(game.ObsRow(t, x, prev_a)));
    std::vector<int> od = obs.Decode(o);
    traj.states.push_back(x);
    traj.common_obs.push_back(od[0]);
    traj.private_obs.emplace_back(od.begin() + 1, od.end());
    if (t == 0) {
      c = od[0];
      for (int i = 0; i < n; ++i) p[i] = od[i + 1];
    } else {
      c = space.ExtendCommon(t - 1, c, od[0]);
      for (int i = 0; i < n; ++i) {
        p[i] = space.ExtendPrivate(t - 1, i, p[i], traj.actions[t - 1][i],
                                   od[i + 1]);
      }
    }
    std::vector<int> a(n);
    for (int i = 0; i < n; ++i) {
      probs.assign(game.NumActions(t, i), 0.0);
      policy(t, i, p[i], c, probs);
      double sum = 0;
      bool ok = true;
      for (double v : probs) {
        if (!std::isfinite(v) || v < -kUserTolerance) ok = false;
        sum += v;
      }
      if (!ok || std::abs(sum - 1.0) > kUserTolerance) {
        throw UndefinedStrategyAtHistory(
            "strategy of " + game.agents[i] + " undefined at t=" +
            std::to_string(t + 1) + ", private history " +
            space.PrivateLabel(t, i, p[i]) + ", common history " +
            space.CommonLabel(t, c));
      }
      a[i] = SampleIndex(rng, probs);
    }
    const int joint = static_cast<int>(game.ActionIndex(t).Encode(a));
    for (int i = 0; i < n; ++i) {
      traj.total_utility[i] += game.Utility(t, i, x, joint);
    }
    traj.actions.push_back(a);
    if (t + 1 < T) {
      x = SampleIndex(rng,
                      game.transition[t].Row(x * game.NumJointActions(t) +
                                             joint));
      prev_a = joint;
    }
  }
  return traj;
}

}  // namespace sibeq
