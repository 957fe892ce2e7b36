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

#include "sibeq/verification.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_map>

#include "sibeq/errors.h"
#include "sibeq/stage_game.h"

namespace sibeq {
namespace {

// Slots of a pure history strategy: one per (t, p, c).
struct InfosetSlots {
  std::vector<int> t_of_block;
  std::vector<int64_t> block_start;  // first slot of each t
  std::vector<int> num_actions;      // per t
  int64_t total = 0;
  double log_count = 0;
};

InfosetSlots CountInfosets(const FiniteGame& game, const HistorySpace& space,
                           int agent, int64_t cap) {
  InfosetSlots slots;
  for (int t = 0; t < game.horizon; ++t) {
    const double count = space.NumPrivate(t, agent) * space.NumCommon(t);
    if (static_cast<double>(slots.total) + count > static_cast<double>(cap)) {
      throw ExplosionError("information sets of " + game.agents[agent],
                           static_cast<double>(slots.total) + count);
    }
    slots.block_start.push_back(slots.total);
    slots.num_actions.push_back(game.NumActions(t, agent));
    slots.total += static_cast<int64_t>(count);
    slots.log_count += count * std::log(game.NumActions(t, agent));
  }
  return slots;
}

double Backward(const FiniteGame& game, const HistorySpace& space,
                const HistoryPolicy& others, int agent, int64_t cap,
                TabularHistoryPolicy* argmax) {
  const int n = game.num_agents();
  const int T = game.horizon;
  HistoryPolicy weights = CombinePolicies(
      agent,
      [](int, int, int64_t, int64_t, std::span<double> probs) {
        std::fill(probs.begin(), probs.end(), 1.0);
      },
      others);
  ForwardOptions options;
  options.cap = cap;
  const std::vector<WorldLayer> layers =
      ForwardWorlds(game, space, weights, options);

  std::vector<double> next_j;
  std::vector<std::vector<double>> probs(n);
  std::vector<int> wd(n + 2), ad(n);
  for (int t = T - 1; t >= 0; --t) {
    const WorldLayer& layer = layers[t];
    const int64_t np = space.PrivateCount(t, agent, cap);
    const int64_t nc = space.CommonCount(t, cap);
    const int na = game.NumActions(t, agent);
    const JointIndex actions = game.ActionIndex(t);
    std::vector<double> imm(static_cast<size_t>(np * nc) * na, 0.0);
    for (int j = 0; j < n; ++j) probs[j].resize(game.NumActions(t, j));
    for (int64_t w = 0; w < layer.layout.size(); ++w) {
      const double m = layer.mass[w];
      if (m == 0) continue;
      layer.layout.Decode(w, wd);
      const int x = layer.State(w);
      for (int j = 0; j < n; ++j) {
        if (j != agent) others(t, j, wd[j + 2], wd[1], probs[j]);
      }
      const int64_t h = static_cast<int64_t>(wd[agent + 2]) * nc + wd[1];
      for (int64_t a = 0; a < actions.size(); ++a) {
        actions.Decode(a, ad);
        double wa = m;
        for (int j = 0; j < n && wa != 0; ++j) {
          if (j != agent) wa *= probs[j][ad[j]];
        }
        if (wa == 0) continue;
        imm[h * na + ad[agent]] +=
            wa * game.Utility(t, agent, x, static_cast<int>(a));
      }
    }
    std::vector<double> cur_j(np * nc, 0.0);
    for (int64_t p = 0; p < np; ++p) {
      for (int64_t c = 0; c < nc; ++c) {
        const int64_t h = p * nc + c;
        double best = -std::numeric_limits<double>::infinity();
        int best_a = 0;
        for (int a = 0; a < na; ++a) {
          double v = imm[h * na + a];
          if (t + 1 < T) {
            const int64_t ncn = static_cast<int64_t>(space.NumCommon(t + 1));
            for (int y = 0; y < game.NumPrivateObs(t + 1, agent); ++y) {
              const int64_t pn = space.ExtendPrivate(t, agent, p, a, y);
              for (int z = 0; z < game.NumCommonObs(t + 1); ++z) {
                v += next_j[pn * ncn + space.ExtendCommon(t, c, z)];
              }
            }
          }
          if (v > best + 1e-12) {
            best = v;
            best_a = a;
          }
        }
        cur_j[h] = best;
        if (argmax != nullptr) {
          auto row = argmax->Mutable(t, agent, p, c);
          std::fill(row.begin(), row.end(), 0.0);
          row[best_a] = 1.0;
        }
      }
    }
    next_j = std::move(cur_j);
  }
  double total = 0;
  for (double v : next_j) total += v;
  return total;
}

void FillPure(const InfosetSlots& slots, const HistorySpace& space, int agent,
              const std::vector<int>& digits, TabularHistoryPolicy* policy) {
  for (size_t t = 0; t < slots.block_start.size(); ++t) {
    const int64_t nc = static_cast<int64_t>(space.NumCommon(t));
    const int64_t end = t + 1 < slots.block_start.size()
                            ? slots.block_start[t + 1]
                            : slots.total;
    for (int64_t k = slots.block_start[t]; k < end; ++k) {
      const int64_t local = k - slots.block_start[t];
      auto row = policy->Mutable(t, agent, local / nc, local % nc);
      std::fill(row.begin(), row.end(), 0.0);
      row[digits[k]] = 1.0;
    }
  }
}

double Enumerate(const FiniteGame& game, const HistorySpace& space,
                 const HistoryPolicy& others, int agent,
                 const InfosetSlots& slots, double count, int workers,
                 int64_t cap, TabularHistoryPolicy* argmax) {
  const int64_t total = static_cast<int64_t>(count);
  workers = std::max(1, workers);
  struct Best {
    double value = -std::numeric_limits<double>::infinity();
    int64_t index = -1;
  };
  std::vector<Best> best(workers);
  auto digits_of = [&](int64_t index) {
    std::vector<int> digits(slots.total);
    for (int64_t k = slots.total - 1; k >= 0; --k) {
      // Find the period of slot k.
      size_t t = slots.block_start.size() - 1;
      while (slots.block_start[t] > k) --t;
      const int na = slots.num_actions[t];
      digits[k] = static_cast<int>(index % na);
      index /= na;
    }
    return digits;
  };
  auto run = [&](int w) {
    TabularHistoryPolicy policy(space, cap);
    const HistoryPolicy combined =
        CombinePolicies(agent, policy.AsPolicy(), others);
    for (int64_t idx = w; idx < total; idx += workers) {
      FillPure(slots, space, agent, digits_of(idx), &policy);
      const double v =
          ExpectedTotalUtility(game, space, combined, cap)[agent];
      if (v > best[w].value + 1e-12) best[w] = {v, idx};
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& th : threads) th.join();
  }
  // Associative reduction: larger value, then smaller index.
  Best overall;
  for (const Best& b : best) {
    if (b.index < 0) continue;
    if (overall.index < 0 || b.value > overall.value + 1e-12 ||
        (std::abs(b.value - overall.value) <= 1e-12 &&
         b.index < overall.index)) {
      overall = b;
    }
  }
  if (argmax != nullptr) {
    FillPure(slots, space, agent, digits_of(overall.index), argmax);
  }
  return overall.value;
}

}  // namespace

DeviationResult BruteForceBestResponse(const FiniteGame& game,
                                       const CompressionMaps& maps,
                                       const SibProfile& sigma, int agent,
                                       const BestResponseOptions& options) {
  const HistorySpace space(game);
  const HistoryPolicy others = SibHistoryPolicy(game, maps, sigma);
  DeviationResult result;
  result.agent = agent;
  result.equilibrium_value =
      ExpectedTotalUtility(game, space, others, options.cap)[agent];
  const InfosetSlots slots = CountInfosets(game, space, agent, options.cap);
  const double count = std::exp(slots.log_count);
  BestResponseMode mode = options.mode;
  if (mode == BestResponseMode::kAuto) {
    mode = count <= options.strategy_cap ? BestResponseMode::kEnumerate
                                         : BestResponseMode::kBackward;
  }
  if (mode == BestResponseMode::kEnumerate && count > options.strategy_cap) {
    throw ExplosionError("pure history strategies of " + game.agents[agent],
                         count);
  }
  result.argmax = TabularHistoryPolicy(space, options.cap);
  result.mode_used = mode;
  if (mode == BestResponseMode::kEnumerate) {
    result.strategies_examined = std::round(count);
    result.best_value = Enumerate(game, space, others, agent, slots,
                                  std::round(count), options.workers,
                                  options.cap, &result.argmax);
  } else {
    result.strategies_examined = count;
    result.best_value =
        Backward(game, space, others, agent, options.cap, &result.argmax);
  }
  result.gain = result.best_value - result.equilibrium_value;
  return result;
}

PomdpResult PomdpBestResponse(const FiniteGame& game,
                              const CompressionMaps& maps,
                              const SibProfile& sigma, const BeliefTree& tree,
                              int agent) {
  const int T = game.horizon;
  const int n = game.num_agents();
  PomdpResult result;
  result.strategy = sigma;
  result.values.resize(T);
  for (int t = T - 1; t >= 0; --t) {
    const int64_t nodes = tree.NumNodes(t);
    result.values[t].resize(nodes);
    for (int64_t c = 0; c < nodes; ++c) {
      ChildValues children;
      if (t + 1 < T) {
        const int nz = game.NumCommonObs(t + 1);
        children.resize(nz);
        for (int z = 0; z < nz; ++z) {
          children[z].resize(n);
          for (int j = 0; j < n; ++j) {
            children[z][j] =
                j == agent ? result.values[t + 1][c * nz + z]
                           : std::vector<double>(maps.NumTypes(t + 1, j), 0.0);
          }
        }
      }
      const StageGame stage(game, maps, t, tree.levels[t][c].belief,
                            children);
      const StageStrategy& st = sigma.stages[t][c];
      std::vector<double>& v = result.values[t][c];
      v.resize(maps.NumTypes(t, agent));
      std::vector<double> r(game.NumActions(t, agent));
      StageStrategy& out = result.strategy.stages[t][c];
      for (int s = 0; s < maps.NumTypes(t, agent); ++s) {
        stage.InterimPayoffs(agent, s, st, r);
        const int best = static_cast<int>(
            std::max_element(r.begin(), r.end()) - r.begin());
        v[s] = r[best];
        auto row = out.MutableRow(agent, s);
        std::fill(row.begin(), row.end(), 0.0);
        row[best] = 1.0;
      }
    }
  }
  // Average over the first-period information state.
  const std::vector<double> f0 = InitialF(game, maps);
  const int nz = game.NumCommonObs(0);
  for (int z = 0; z < nz; ++z) {
    double pz = 0;
    for (size_t k = z; k < f0.size(); k += nz) pz += f0[k];
    if (pz == 0) continue;
    const std::vector<double> marginal = TypeMarginal(
        game, maps, 0, agent, tree.levels[0][z].belief.per_agent[agent]);
    for (int s = 0; s < maps.NumTypes(0, agent); ++s) {
      result.value += pz * marginal[s] * result.values[0][z][s];
    }
  }
  return result;
}

std::vector<TabularHistoryPolicy> SampleDeviations(const HistorySpace& space,
                                                   int agent, int samples,
                                                   int grid, uint64_t seed) {
  const FiniteGame& game = space.game();
  std::vector<TabularHistoryPolicy> out;
  TabularHistoryPolicy uniform(space);
  for (int t = 0; t < game.horizon; ++t) {
    const int na = game.NumActions(t, agent);
    for (int64_t p = 0; p < space.PrivateCount(t, agent); ++p) {
      for (int64_t c = 0; c < space.CommonCount(t); ++c) {
        auto row = uniform.Mutable(t, agent, p, c);
        std::fill(row.begin(), row.end(), 1.0 / na);
      }
    }
  }
  out.push_back(std::move(uniform));
  Rng rng(seed);
  for (int k = 0; k < samples; ++k) {
    out.push_back(RandomHistoryPolicy(space, agent, grid, rng));
  }
  return out;
}

namespace {

HistoryPolicy DeviationPolicy(int agent, const TabularHistoryPolicy& dev,
                              const HistoryPolicy& others) {
  return CombinePolicies(agent, dev.AsPolicy(), others);
}

}  // namespace

double CheckMarkovProperty(const FiniteGame& game, const CompressionMaps& maps,
                           const SibProfile& sigma, const BeliefTree& tree,
                           int agent,
                           const std::vector<TabularHistoryPolicy>& deviations,
                           int64_t cap) {
  const int T = game.horizon;
  const int n = game.num_agents();
  const HistorySpace space(game);
  const HistoryPolicy others = SibHistoryPolicy(game, maps, sigma);
  std::vector<std::vector<int>> classes(T);
  std::vector<int> num_classes(T);
  for (int t = 0; t < T; ++t) {
    classes[t] = BeliefClasses(tree.levels[t]);
    num_classes[t] =
        *std::max_element(classes[t].begin(), classes[t].end()) + 1;
  }
  double worst = 0;
  std::vector<std::vector<double>> probs(n);
  std::vector<int> wd(n + 2), ad(n), sd(n), snd(n);
  for (const TabularHistoryPolicy& dev : deviations) {
    const HistoryPolicy policy = DeviationPolicy(agent, dev, others);
    ForwardOptions options;
    options.state_history = true;
    options.cap = cap;
    const std::vector<WorldLayer> layers =
        ForwardWorlds(game, space, policy, options);
    for (int t = 0; t + 1 < T; ++t) {
      const WorldLayer& layer = layers[t];
      const JointIndex types = maps.TypeIndex(t);
      const JointIndex next_types = maps.TypeIndex(t + 1);
      const JointIndex actions = game.ActionIndex(t);
      const JointIndex obs = game.ObsIndex(t + 1);
      const int64_t nc = space.CommonCount(t, cap);
      const int64_t ncn = space.CommonCount(t + 1, cap);
      const int na_i = game.NumActions(t, agent);
      const int ny = game.NumPrivateObs(t + 1, agent);
      const int nz = game.NumCommonObs(t + 1);
      struct Fine {
        int64_t coarse;
        double mass;
        std::unordered_map<int64_t, double> dist;
      };
      std::vector<Fine> fines;
      std::unordered_map<int64_t, std::unordered_map<int64_t, double>> coarse;
      std::unordered_map<int64_t, double> coarse_mass;
      for (int j = 0; j < n; ++j) probs[j].resize(game.NumActions(t, j));
      for (int64_t w = 0; w < layer.layout.size(); ++w) {
        const double m = layer.mass[w];
        if (m == 0) continue;
        layer.layout.Decode(w, wd);
        const int x = layer.State(w);
        const int64_t c = wd[1];
        for (int j = 0; j < n; ++j) {
          policy(t, j, wd[j + 2], c, probs[j]);
          sd[j] = maps.Zeta(t, j, wd[j + 2], c, nc);
        }
        const int64_t s = types.Encode(sd);
        for (int ai = 0; ai < na_i; ++ai) {
          const double pa = probs[agent][ai];
          if (pa == 0) continue;
          Fine fine;
          fine.mass = m * pa;
          fine.coarse =
              ((x * types.size() + s) * num_classes[t] + classes[t][c]) *
                  na_i +
              ai;
          for (int64_t a = 0; a < actions.size(); ++a) {
            actions.Decode(a, ad);
            if (ad[agent] != ai) continue;
            double wa = 1.0;
            for (int j = 0; j < n && wa != 0; ++j) {
              if (j != agent) wa *= probs[j][ad[j]];
            }
            if (wa == 0) continue;
            const int row = x * static_cast<int>(actions.size()) +
                            static_cast<int>(a);
            for (int xn = 0; xn < game.NumStates(t + 1); ++xn) {
              const double px = game.transition[t](row, xn);
              if (px == 0) continue;
              auto orow = game.observation[t + 1].Row(
                  game.ObsRow(t + 1, xn, static_cast<int>(a)));
              for (int64_t o = 0; o < obs.size(); ++o) {
                if (orow[o] == 0) continue;
                const std::vector<int> od = obs.Decode(o);
                const int64_t cn = space.ExtendCommon(t, c, od[0]);
                for (int j = 0; j < n; ++j) {
                  const int64_t pn =
                      space.ExtendPrivate(t, j, wd[j + 2], ad[j], od[j + 1]);
                  snd[j] = maps.Zeta(t + 1, j, pn, cn, ncn);
                }
                const int64_t key =
                    (((xn * next_types.size() + next_types.Encode(snd)) *
                          num_classes[t + 1] +
                      classes[t + 1][cn]) *
                         ny +
                     od[agent + 1]) *
                        nz +
                    od[0];
                fine.dist[key] += wa * px * orow[o];
              }
            }
          }
          auto& cd = coarse[fine.coarse];
          for (const auto& [key, v] : fine.dist) cd[key] += fine.mass * v;
          coarse_mass[fine.coarse] += fine.mass;
          fines.push_back(std::move(fine));
        }
      }
      for (const Fine& fine : fines) {
        if (fine.mass <= kFeasibilityThreshold) continue;
        const auto& cd = coarse[fine.coarse];
        const double cm = coarse_mass[fine.coarse];
        for (const auto& [key, v] : cd) {
          auto it = fine.dist.find(key);
          const double fv = it == fine.dist.end() ? 0.0 : it->second;
          worst = std::max(worst, std::abs(fv - v / cm));
        }
        for (const auto& [key, v] : fine.dist) {
          if (!cd.count(key)) worst = std::max(worst, std::abs(v));
        }
      }
    }
  }
  return worst;
}

double CheckUtilityEquivalence(
    const FiniteGame& game, const CompressionMaps& maps,
    const SibProfile& sigma, int agent,
    const std::vector<TabularHistoryPolicy>& deviations, int64_t cap) {
  const int n = game.num_agents();
  const HistorySpace space(game);
  const HistoryPolicy others = SibHistoryPolicy(game, maps, sigma);
  double worst = 0;
  std::vector<std::vector<double>> probs(n);
  std::vector<int> wd(n + 2), ad(n), sd(n);
  for (const TabularHistoryPolicy& dev : deviations) {
    const HistoryPolicy policy = DeviationPolicy(agent, dev, others);
    ForwardOptions options;
    options.cap = cap;
    const std::vector<WorldLayer> layers =
        ForwardWorlds(game, space, policy, options);
    for (const WorldLayer& layer : layers) {
      const int t = layer.t;
      const JointIndex types = maps.TypeIndex(t);
      const JointIndex actions = game.ActionIndex(t);
      const int64_t nc = space.CommonCount(t, cap);
      const int na_i = game.NumActions(t, agent);
      // Law of (x, s, node, a^i).
      std::map<std::tuple<int, int64_t, int64_t, int>, double> law;
      double direct = 0;
      for (int j = 0; j < n; ++j) probs[j].resize(game.NumActions(t, j));
      for (int64_t w = 0; w < layer.layout.size(); ++w) {
        const double m = layer.mass[w];
        if (m == 0) continue;
        layer.layout.Decode(w, wd);
        const int x = layer.State(w);
        for (int j = 0; j < n; ++j) {
          policy(t, j, wd[j + 2], wd[1], probs[j]);
          sd[j] = maps.Zeta(t, j, wd[j + 2], wd[1], nc);
        }
        for (int64_t a = 0; a < actions.size(); ++a) {
          actions.Decode(a, ad);
          double wa = m;
          for (int j = 0; j < n && wa != 0; ++j) wa *= probs[j][ad[j]];
          direct += wa * game.Utility(t, agent, x, static_cast<int>(a));
        }
        const int64_t s = types.Encode(sd);
        for (int ai = 0; ai < na_i; ++ai) {
          if (probs[agent][ai] == 0) continue;
          law[{x, s, wd[1], ai}] += m * probs[agent][ai];
        }
      }
      double transformed = 0;
      for (const auto& [key, mass] : law) {
        const auto& [x, s, c, ai] = key;
        types.Decode(s, sd);
        const StageStrategy& st = sigma.stages[t][c];
        for (int64_t a = 0; a < actions.size(); ++a) {
          actions.Decode(a, ad);
          if (ad[agent] != ai) continue;
          double w = mass;
          for (int j = 0; j < n && w != 0; ++j) {
            if (j != agent) w *= st.Prob(j, sd[j], ad[j]);
          }
          transformed += w * game.Utility(t, agent, x, static_cast<int>(a));
        }
      }
      worst = std::max(worst, std::abs(direct - transformed));
    }
  }
  return worst;
}

double CheckPrivateBeliefConsistency(
    const FiniteGame& game, const CompressionMaps& maps,
    const SibProfile& sigma, const BeliefTree& tree, int agent,
    const std::vector<TabularHistoryPolicy>& deviations, int64_t cap) {
  const int n = game.num_agents();
  const HistorySpace space(game);
  const HistoryPolicy others = SibHistoryPolicy(game, maps, sigma);
  double worst = 0;
  std::vector<int> wd(n + 2), od;
  for (const TabularHistoryPolicy& dev : deviations) {
    const HistoryPolicy policy = DeviationPolicy(agent, dev, others);
    ForwardOptions options;
    options.cap = cap;
    const std::vector<WorldLayer> layers =
        ForwardWorlds(game, space, policy, options);
    for (const WorldLayer& layer : layers) {
      const int t = layer.t;
      const JointIndex other_types = maps.OtherTypeIndex(t, agent);
      const int64_t nc = space.CommonCount(t, cap);
      const int64_t no = other_types.size();
      od.resize(other_types.num_components());
      std::unordered_map<int64_t, std::vector<double>> posterior;
      for (int64_t w = 0; w < layer.layout.size(); ++w) {
        const double m = layer.mass[w];
        if (m == 0) continue;
        layer.layout.Decode(w, wd);
        const int x = layer.State(w);
        for (int j = 0, k = 0; j < n; ++j) {
          if (j != agent) od[k++] = maps.Zeta(t, j, wd[j + 2], wd[1], nc);
        }
        const int64_t h = static_cast<int64_t>(wd[agent + 2]) * nc + wd[1];
        auto& v = posterior[h];
        if (v.empty()) v.assign(game.NumStates(t) * no, 0.0);
        v[x * no + other_types.Encode(od)] += m;
      }
      for (auto& [h, v] : posterior) {
        double mass = 0;
        for (double p : v) mass += p;
        if (mass <= kFeasibilityThreshold) continue;
        const int64_t p = h / nc, c = h % nc;
        const int s = maps.Zeta(t, agent, p, c, nc);
        const std::vector<double> predicted = PrivateBelief(
            game, maps, t, agent, tree.levels[t][c].belief.per_agent[agent],
            s);
        for (size_t k = 0; k < v.size(); ++k) {
          worst = std::max(worst, std::abs(v[k] / mass - predicted[k]));
        }
      }
    }
  }
  return worst;
}

Certification Certify(const FiniteGame& game, const CompressionMaps& maps,
                      const SibProfile& sigma, double eps_bne,
                      const BestResponseOptions& options) {
  Certification cert;
  cert.eps = eps_bne;
  cert.max_gain = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < game.num_agents(); ++i) {
    cert.per_agent.push_back(
        BruteForceBestResponse(game, maps, sigma, i, options));
    cert.max_gain = std::max(cert.max_gain, cert.per_agent.back().gain);
  }
  cert.certified = cert.max_gain <= eps_bne;
  return cert;
}

}  // namespace sibeq
