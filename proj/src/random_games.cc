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

#include "sibeq/random_games.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace sibeq {
namespace {

LabelSet Labels(const std::string& prefix, int n) {
  LabelSet out;
  for (int k = 0; k < n; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

int Size(Rng& rng, int max) { return 1 + UniformInt(rng, std::max(1, max)); }

void FillRow(Rng& rng, double sparsity, std::span<double> row) {
  double total = 0;
  for (double& v : row) {
    v = UniformDouble(rng) < sparsity ? 0.0 : -std::log1p(-UniformDouble(rng));
    total += v;
  }
  if (total <= 0) {
    row[UniformInt(rng, static_cast<int>(row.size()))] = 1.0;
    return;
  }
  for (double& v : row) v /= total;
}

void FillKernel(Rng& rng, double sparsity, Kernel* k) {
  for (int r = 0; r < k->rows(); ++r) FillRow(rng, sparsity, k->MutableRow(r));
}

}  // namespace

FiniteGame RandomGame(Rng& rng, const RandomGameOptions& options) {
  const int T = options.horizon;
  const int n = options.agents;
  auto bound = [&](int max) {
    return T >= 3 ? std::min(max, options.max_size_long_horizon) : max;
  };
  FiniteGame g;
  g.horizon = T;
  g.agents = Labels("agent", n);
  g.states.resize(T);
  g.actions.resize(T);
  g.private_obs.resize(T);
  g.common_obs.resize(T);
  for (int t = 0; t < T; ++t) {
    g.states[t] = Labels("x", Size(rng, bound(options.max_states)));
    g.common_obs[t] =
        options.common_observations
            ? Labels("z", Size(rng, bound(options.max_common_obs)))
            : LabelSet{"none"};
    for (int i = 0; i < n; ++i) {
      g.actions[t].push_back(Labels("a", Size(rng, bound(options.max_actions))));
      g.private_obs[t].push_back(
          Labels("y", Size(rng, bound(options.max_private_obs))));
    }
  }
  g.initial.resize(g.NumStates(0));
  FillRow(rng, 0.0, g.initial);
  g.transition.resize(T - 1);
  for (int t = 0; t + 1 < T; ++t) {
    g.transition[t] =
        Kernel(g.NumStates(t) * g.NumJointActions(t), g.NumStates(t + 1));
    FillKernel(rng, options.sparsity, &g.transition[t]);
  }
  g.observation.resize(T);
  for (int t = 0; t < T; ++t) {
    // Independent private and common channels, multiplied out.
    const int rows = g.NumStates(t) * (t == 0 ? 1 : g.NumJointActions(t - 1));
    std::vector<Kernel> parts;
    for (int i = 0; i < n; ++i) {
      Kernel k(rows, g.NumPrivateObs(t, i));
      FillKernel(rng, options.sparsity, &k);
      parts.push_back(std::move(k));
    }
    Kernel common(rows, g.NumCommonObs(t));
    FillKernel(rng, options.sparsity, &common);
    g.observation[t] = ProductObservationKernel(g, t, parts, common);
  }
  g.utility.resize(T);
  for (int t = 0; t < T; ++t) {
    g.utility[t].resize(n);
    for (int i = 0; i < n; ++i) {
      g.utility[t][i].resize(g.NumStates(t) * g.NumJointActions(t));
      for (double& u : g.utility[t][i]) u = 2 * UniformDouble(rng) - 1;
    }
  }
  return ValidateGame(std::move(g));
}

FiniteGame ZeroUtilityGame(FiniteGame game) {
  for (auto& per_t : game.utility) {
    for (auto& per_i : per_t) std::fill(per_i.begin(), per_i.end(), 0.0);
  }
  return game;
}

}  // namespace sibeq
