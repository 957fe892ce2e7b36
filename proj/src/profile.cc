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

#include "sibeq/profile.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "sibeq/errors.h"

namespace sibeq {

StageStrategy UniformStageStrategy(const FiniteGame& game,
                                   const CompressionMaps& maps, int t) {
  StageStrategy s;
  const int n = game.num_agents();
  s.num_actions.resize(n);
  s.num_types.resize(n);
  s.tables.resize(n);
  for (int i = 0; i < n; ++i) {
    s.num_actions[i] = game.NumActions(t, i);
    s.num_types[i] = maps.NumTypes(t, i);
    s.tables[i].assign(
        static_cast<size_t>(s.num_actions[i]) * s.num_types[i],
        1.0 / s.num_actions[i]);
  }
  return s;
}

double StageDistance(const StageStrategy& a, const StageStrategy& b) {
  double d = 0;
  for (int i = 0; i < a.num_agents(); ++i) {
    for (size_t k = 0; k < a.tables[i].size(); ++k) {
      d = std::max(d, std::abs(a.tables[i][k] - b.tables[i][k]));
    }
  }
  return d;
}

StageStrategy MixStage(const StageStrategy& a, const StageStrategy& b,
                       double eta) {
  StageStrategy out = a;
  for (int i = 0; i < a.num_agents(); ++i) {
    for (size_t k = 0; k < a.tables[i].size(); ++k) {
      out.tables[i][k] = (1 - eta) * a.tables[i][k] + eta * b.tables[i][k];
    }
  }
  return out;
}

SibProfile UniformProfile(const FiniteGame& game, const CompressionMaps& maps,
                          int64_t cap) {
  const HistorySpace space(game);
  SibProfile profile;
  profile.stages.resize(game.horizon);
  for (int t = 0; t < game.horizon; ++t) {
    profile.stages[t].assign(space.CommonCount(t, cap),
                             UniformStageStrategy(game, maps, t));
  }
  return profile;
}

SibProfile RandomProfile(const FiniteGame& game, const CompressionMaps& maps,
                         Rng& rng, bool pure, int64_t cap) {
  SibProfile profile = UniformProfile(game, maps, cap);
  for (auto& level : profile.stages) {
    for (StageStrategy& stage : level) {
      for (int i = 0; i < stage.num_agents(); ++i) {
        for (int s = 0; s < stage.num_types[i]; ++s) {
          auto row = stage.MutableRow(i, s);
          if (pure) {
            std::fill(row.begin(), row.end(), 0.0);
            row[UniformInt(rng, static_cast<int>(row.size()))] = 1.0;
            continue;
          }
          // Exponential spacings give a uniform point on the simplex.
          double sum = 0;
          for (double& v : row) {
            v = -std::log(1.0 - UniformDouble(rng));
            sum += v;
          }
          for (double& v : row) v /= sum;
        }
      }
    }
  }
  return profile;
}

double ProfileDistance(const SibProfile& a, const SibProfile& b) {
  double d = 0;
  for (size_t t = 0; t < a.stages.size(); ++t) {
    for (size_t c = 0; c < a.stages[t].size(); ++c) {
      d = std::max(d, StageDistance(a.stages[t][c], b.stages[t][c]));
    }
  }
  return d;
}

void ValidateProfile(const FiniteGame& game, const CompressionMaps& maps,
                     const SibProfile& profile) {
  const HistorySpace space(game);
  if (profile.horizon() != game.horizon) {
    throw ShapeMismatch("profile has the wrong number of periods");
  }
  for (int t = 0; t < game.horizon; ++t) {
    if (static_cast<double>(profile.stages[t].size()) != space.NumCommon(t)) {
      throw ShapeMismatch("profile has the wrong number of nodes at t=" +
                          std::to_string(t + 1));
    }
    for (size_t c = 0; c < profile.stages[t].size(); ++c) {
      const StageStrategy& st = profile.stages[t][c];
      if (st.num_agents() != game.num_agents()) {
        throw ShapeMismatch("stage strategy has the wrong number of agents");
      }
      for (int i = 0; i < game.num_agents(); ++i) {
        if (st.num_actions[i] != game.NumActions(t, i) ||
            st.num_types[i] != maps.NumTypes(t, i) ||
            static_cast<int>(st.tables[i].size()) !=
                st.num_actions[i] * st.num_types[i]) {
          throw ShapeMismatch("stage strategy table of " + game.agents[i] +
                              " has the wrong shape at t=" +
                              std::to_string(t + 1));
        }
        for (int s = 0; s < st.num_types[i]; ++s) {
          double sum = 0;
          for (double v : st.Row(i, s)) {
            if (!std::isfinite(v) || v < -kUserTolerance) {
              throw UndefinedStrategyAtHistory(
                  "strategy of " + game.agents[i] + " at t=" +
                  std::to_string(t + 1) + " type " + maps.sets[t][i][s] +
                  " is not a distribution");
            }
            sum += v;
          }
          if (std::abs(sum - 1) > kUserTolerance) {
            throw RowSumError("strategy of " + game.agents[i] + " at t=" +
                              std::to_string(t + 1) + " type " +
                              maps.sets[t][i][s] + " sums to " +
                              std::to_string(sum));
          }
        }
      }
    }
  }
}

HistoryPolicy SibHistoryPolicy(const FiniteGame& game,
                               const CompressionMaps& maps,
                               const SibProfile& profile) {
  std::vector<int64_t> num_common(game.horizon);
  const HistorySpace space(game);
  for (int t = 0; t < game.horizon; ++t) num_common[t] = space.CommonCount(t);
  return [&maps, &profile, num_common](int t, int i, int64_t p, int64_t c,
                                       std::span<double> probs) {
    const int s = maps.Zeta(t, i, p, c, num_common[t]);
    auto row = profile.stages[t][c].Row(i, s);
    std::copy(row.begin(), row.end(), probs.begin());
  };
}

HistoryPolicy CombinePolicies(int agent, HistoryPolicy own,
                              HistoryPolicy others) {
  return [agent, own = std::move(own), others = std::move(others)](
             int t, int i, int64_t p, int64_t c, std::span<double> probs) {
    if (i == agent) {
      own(t, i, p, c, probs);
    } else {
      others(t, i, p, c, probs);
    }
  };
}

}  // namespace sibeq
