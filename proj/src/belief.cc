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

#include "sibeq/belief.h"

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sibeq/errors.h"

namespace sibeq {

bool BeliefNode::AnyFallback() const {
  for (bool f : fallback) {
    if (f) return true;
  }
  return false;
}

int BeliefTree::FallbackCount() const {
  int count = 0;
  for (const auto& level : levels) {
    for (const BeliefNode& node : level) {
      for (bool f : node.fallback) count += f ? 1 : 0;
    }
  }
  return count;
}

std::vector<double> InitialF(const FiniteGame& game,
                             const CompressionMaps& maps) {
  const int n = game.num_agents();
  const JointIndex types = maps.TypeIndex(0);
  const JointIndex obs = game.ObsIndex(0);
  const int nz = game.NumCommonObs(0);
  const int64_t ns = types.size();
  std::vector<double> f(game.NumStates(0) * ns * nz, 0.0);
  std::vector<int> od(n + 1), sd(n);
  for (int x = 0; x < game.NumStates(0); ++x) {
    if (game.initial[x] == 0) continue;
    auto row = game.observation[0].Row(game.ObsRow(0, x, 0));
    for (int64_t o = 0; o < obs.size(); ++o) {
      if (row[o] == 0) continue;
      obs.Decode(o, od);
      for (int j = 0; j < n; ++j) sd[j] = maps.Phi0(game, j, od[j + 1], od[0]);
      const int64_t s = types.Encode(sd);
      f[(x * ns + s) * nz + od[0]] += game.initial[x] * row[o];
    }
  }
  return f;
}

std::vector<double> PropagateF(const FiniteGame& game,
                               const CompressionMaps& maps, int t, int agent,
                               std::span<const double> pi,
                               const StageStrategy& sigma) {
  const int n = game.num_agents();
  const JointIndex types = maps.TypeIndex(t);
  const JointIndex next_types = maps.TypeIndex(t + 1);
  const JointIndex actions = game.ActionIndex(t);
  const JointIndex obs = game.ObsIndex(t + 1);
  const int nx = game.NumStates(t);
  const int nxn = game.NumStates(t + 1);
  const int nz = game.NumCommonObs(t + 1);
  const int64_t ns = types.size();
  const int64_t nsn = next_types.size();
  if (static_cast<int64_t>(pi.size()) != nx * ns) {
    throw ShapeMismatch("PropagateF: belief has the wrong size");
  }
  std::vector<double> f(nxn * nsn * nz, 0.0);
  std::vector<std::vector<int>> obs_digits(obs.size());
  for (int64_t o = 0; o < obs.size(); ++o) obs_digits[o] = obs.Decode(o);
  std::vector<std::vector<int>> act_digits(actions.size());
  for (int64_t a = 0; a < actions.size(); ++a) act_digits[a] = actions.Decode(a);
  const double own_weight = 1.0 / game.NumActions(t, agent);
  std::vector<int> sd(n), snd(n);
  for (int x = 0; x < nx; ++x) {
    for (int64_t s = 0; s < ns; ++s) {
      const double m = pi[x * ns + s];
      if (m == 0) continue;
      types.Decode(s, sd);
      for (int64_t a = 0; a < actions.size(); ++a) {
        const auto& ad = act_digits[a];
        double w = m * own_weight;
        for (int j = 0; j < n && w != 0; ++j) {
          if (j != agent) w *= sigma.Prob(j, sd[j], ad[j]);
        }
        if (w == 0) continue;
        const int row = x * static_cast<int>(actions.size()) +
                        static_cast<int>(a);
        for (int xn = 0; xn < nxn; ++xn) {
          const double px = game.transition[t](row, xn);
          if (px == 0) continue;
          auto orow = game.observation[t + 1].Row(
              game.ObsRow(t + 1, xn, static_cast<int>(a)));
          for (int64_t o = 0; o < obs.size(); ++o) {
            if (orow[o] == 0) continue;
            const auto& od = obs_digits[o];
            for (int j = 0; j < n; ++j) {
              snd[j] = maps.Phi(game, t + 1, j, sd[j], od[j + 1], od[0],
                                ad[j]);
            }
            const int64_t sn = next_types.Encode(snd);
            f[(xn * nsn + sn) * nz + od[0]] += w * px * orow[o];
          }
        }
      }
    }
  }
  return f;
}

BeliefNode ConditionOnCommonObs(const FiniteGame& game,
                                const CompressionMaps& maps, int t,
                                const std::vector<std::vector<double>>& f,
                                int z, int64_t node,
                                const FallbackRule& fallback) {
  const int n = game.num_agents();
  const int nz = game.NumCommonObs(t);
  const int64_t size = game.NumStates(t) * maps.TypeIndex(t).size();
  BeliefNode out;
  out.belief.per_agent.resize(n);
  out.mass.assign(n, 0.0);
  out.fallback.assign(n, false);
  for (int i = 0; i < n; ++i) {
    std::vector<double>& pi = out.belief.per_agent[i];
    pi.assign(size, 0.0);
    double mass = 0;
    for (int64_t k = 0; k < size; ++k) {
      pi[k] = f[i][k * nz + z];
      mass += pi[k];
    }
    out.mass[i] = mass;
    if (mass > kFeasibilityThreshold) {
      for (double& v : pi) v /= mass;
      continue;
    }
    out.fallback[i] = true;
    if (fallback) {
      pi = fallback(t, i, node);
      double sum = 0;
      for (double v : pi) sum += v;
      if (static_cast<int64_t>(pi.size()) != size ||
          std::abs(sum - 1) > kUserTolerance) {
        throw RowSumError("fallback rule returned an invalid belief");
      }
    } else {
      std::fill(pi.begin(), pi.end(), 1.0 / static_cast<double>(size));
    }
  }
  return out;
}

BeliefNode UpdateBelief(const FiniteGame& game, const CompressionMaps& maps,
                        int t, const CibBelief& pi, const StageStrategy& sigma,
                        int z_next, int64_t child_node,
                        const FallbackRule& fallback) {
  std::vector<std::vector<double>> f(game.num_agents());
  for (int i = 0; i < game.num_agents(); ++i) {
    f[i] = PropagateF(game, maps, t, i, pi.per_agent[i], sigma);
  }
  return ConditionOnCommonObs(game, maps, t + 1, f, z_next, child_node,
                              fallback);
}

namespace {

void CheckTreeSize(const FiniteGame& game, const CompressionMaps& maps, int t,
                   int64_t cap) {
  const HistorySpace space(game);
  const double nodes = space.NumCommon(t);
  const double per_node = static_cast<double>(game.NumStates(t)) *
                          static_cast<double>(maps.TypeIndex(t).size()) *
                          game.num_agents();
  if (nodes * per_node > static_cast<double>(cap)) {
    throw ExplosionError("belief tree level t=" + std::to_string(t + 1),
                         nodes * per_node);
  }
}

}  // namespace

void RebuildBeliefTreeFrom(const FiniteGame& game, const CompressionMaps& maps,
                           const SibProfile& profile, int t0, BeliefTree* tree,
                           const BeliefTreeOptions& options) {
  const int n = game.num_agents();
  const int last = options.last_t < 0 ? game.horizon - 1 : options.last_t;
  tree->levels.resize(last + 1);
  for (int t = t0; t < last; ++t) {
    CheckTreeSize(game, maps, t + 1, options.cap);
    const int nz = game.NumCommonObs(t + 1);
    auto& next = tree->levels[t + 1];
    next.assign(tree->levels[t].size() * nz, BeliefNode());
    std::vector<std::vector<double>> f(n);
    for (size_t c = 0; c < tree->levels[t].size(); ++c) {
      const BeliefNode& node = tree->levels[t][c];
      for (int i = 0; i < n; ++i) {
        f[i] = PropagateF(game, maps, t, i, node.belief.per_agent[i],
                          profile.stages[t][c]);
      }
      for (int z = 0; z < nz; ++z) {
        const int64_t child = static_cast<int64_t>(c) * nz + z;
        next[child] = ConditionOnCommonObs(game, maps, t + 1, f, z, child,
                                           options.fallback);
      }
    }
  }
}

BeliefTree BuildBeliefTree(const FiniteGame& game, const CompressionMaps& maps,
                           const SibProfile& profile,
                           const BeliefTreeOptions& options) {
  const int n = game.num_agents();
  CheckTreeSize(game, maps, 0, options.cap);
  BeliefTree tree;
  tree.levels.resize(1);
  const std::vector<double> f0 = InitialF(game, maps);
  const std::vector<std::vector<double>> f(n, f0);
  for (int z = 0; z < game.NumCommonObs(0); ++z) {
    tree.levels[0].push_back(
        ConditionOnCommonObs(game, maps, 0, f, z, z, options.fallback));
  }
  RebuildBeliefTreeFrom(game, maps, profile, 0, &tree, options);
  return tree;
}

std::vector<int> BeliefClasses(const std::vector<BeliefNode>& level) {
  std::map<std::vector<int64_t>, int> ids;
  std::vector<int> out(level.size());
  for (size_t c = 0; c < level.size(); ++c) {
    std::vector<int64_t> key;
    for (const auto& pi : level[c].belief.per_agent) {
      for (double v : pi) key.push_back(std::llround(v * 1e12));
    }
    auto it = ids.emplace(std::move(key), static_cast<int>(ids.size())).first;
    out[c] = it->second;
  }
  return out;
}

SibProfile BeliefMeasurableProfile(const FiniteGame& game,
                                   const CompressionMaps& maps,
                                   SibProfile profile, BeliefTree* tree,
                                   const BeliefTreeOptions& options) {
  BeliefTree local = BuildBeliefTree(game, maps, profile, options);
  for (int t = 0; t < game.horizon; ++t) {
    const std::vector<int> classes = BeliefClasses(local.levels[t]);
    std::vector<int64_t> first(classes.size(), -1);
    for (size_t c = 0; c < classes.size(); ++c) {
      int64_t& f = first[classes[c]];
      if (f < 0) {
        f = static_cast<int64_t>(c);
      } else {
        profile.stages[t][c] = profile.stages[t][f];
      }
    }
    if (t + 1 < game.horizon) {
      RebuildBeliefTreeFrom(game, maps, profile, t, &local, options);
    }
  }
  if (tree != nullptr) *tree = std::move(local);
  return profile;
}

std::vector<double> TypeMarginal(const FiniteGame& game,
                                 const CompressionMaps& maps, int t, int agent,
                                 std::span<const double> pi) {
  const JointIndex types = maps.TypeIndex(t);
  std::vector<double> out(maps.NumTypes(t, agent), 0.0);
  const int64_t ns = types.size();
  for (int x = 0; x < game.NumStates(t); ++x) {
    for (int64_t s = 0; s < ns; ++s) {
      out[types.Component(s, agent)] += pi[x * ns + s];
    }
  }
  return out;
}

std::vector<double> PrivateBelief(const FiniteGame& game,
                                  const CompressionMaps& maps, int t,
                                  int agent, std::span<const double> pi,
                                  int s_i) {
  const int n = game.num_agents();
  const JointIndex types = maps.TypeIndex(t);
  const JointIndex others = maps.OtherTypeIndex(t, agent);
  const int64_t ns = types.size();
  if (s_i < 0 || s_i >= maps.NumTypes(t, agent)) {
    throw IndexOutOfRange("PrivateBelief: type out of range");
  }
  std::vector<double> out(game.NumStates(t) * others.size(), 0.0);
  std::vector<int> sd(n), od(others.num_components());
  double mass = 0;
  for (int64_t s = 0; s < ns; ++s) {
    types.Decode(s, sd);
    if (sd[agent] != s_i) continue;
    for (int j = 0, k = 0; j < n; ++j) {
      if (j != agent) od[k++] = sd[j];
    }
    const int64_t o = others.Encode(od);
    for (int x = 0; x < game.NumStates(t); ++x) {
      const double v = pi[x * ns + s];
      out[x * others.size() + o] += v;
      mass += v;
    }
  }
  if (mass <= kFeasibilityThreshold) {
    throw ZeroMarginalError("type " + maps.sets[t][agent][s_i] + " of " +
                            game.agents[agent] + " has zero probability");
  }
  for (double& v : out) v /= mass;
  return out;
}

std::vector<BeliefNode> NoCommonObsChain(const FiniteGame& game,
                                         const CompressionMaps& maps,
                                         const SibProfile& profile) {
  for (int t = 0; t < game.horizon; ++t) {
    if (game.NumCommonObs(t) != 1) {
      throw NotApplicable("game has common observations at t=" +
                          std::to_string(t + 1));
    }
  }
  BeliefTree tree = BuildBeliefTree(game, maps, profile);
  std::vector<BeliefNode> chain;
  for (auto& level : tree.levels) chain.push_back(std::move(level[0]));
  return chain;
}

}  // namespace sibeq
