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

#include "sibeq/sufficiency.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <unordered_map>

#include "sibeq/belief.h"
#include "sibeq/errors.h"
#include "sibeq/profile.h"

namespace sibeq {

const char* VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kNotChecked:
      return "not-checked";
    case Verdict::kPass:
      return "pass";
    case Verdict::kSampledPass:
      return "sampled-pass";
    case Verdict::kFail:
      return "fail";
  }
  return "unknown";
}

namespace {

Verdict Combine(Verdict a, Verdict b) {
  if (a == Verdict::kNotChecked) return b;
  if (b == Verdict::kNotChecked) return a;
  if (a == Verdict::kFail || b == Verdict::kFail) return Verdict::kFail;
  if (a == Verdict::kSampledPass || b == Verdict::kSampledPass) {
    return Verdict::kSampledPass;
  }
  return Verdict::kPass;
}

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Renders a PMF over (x, s^-i) with labels.
std::string RenderBelief(const FiniteGame& game, const CompressionMaps& maps,
                         int t, int agent, const std::vector<double>& v) {
  const JointIndex others = maps.OtherTypeIndex(t, agent);
  const int n = game.num_agents();
  std::string out;
  for (int x = 0; x < game.NumStates(t); ++x) {
    for (int64_t o = 0; o < others.size(); ++o) {
      const double p = v[x * others.size() + o];
      if (p == 0) continue;
      if (!out.empty()) out += " ";
      out += "(" + game.states[t][x];
      for (int j = 0, k = 0; j < n; ++j) {
        if (j == agent) continue;
        out += "," + maps.sets[t][j][others.Component(o, k++)];
      }
      out += ")=" + Num(p);
    }
  }
  return out.empty() ? "{}" : out;
}

void Normalize(std::vector<double>* v) {
  double sum = 0;
  for (double p : *v) sum += p;
  if (sum > 0) {
    for (double& p : *v) p /= sum;
  }
}

double MaxGap(const std::vector<double>& a, const std::vector<double>& b) {
  double g = 0;
  for (size_t k = 0; k < a.size(); ++k) g = std::max(g, std::abs(a[k] - b[k]));
  return g;
}

bool ZetaInjective(const FiniteGame& game, const CompressionMaps& maps,
                   const HistorySpace& space, int64_t cap) {
  for (int t = 0; t < game.horizon; ++t) {
    const int64_t nc = space.CommonCount(t, cap);
    for (int i = 0; i < game.num_agents(); ++i) {
      const int64_t np = space.PrivateCount(t, i, cap);
      for (int64_t c = 0; c < nc; ++c) {
        std::set<int> seen;
        for (int64_t p = 0; p < np; ++p) {
          if (!seen.insert(maps.Zeta(t, i, p, c, nc)).second) return false;
        }
      }
    }
  }
  return true;
}

std::vector<SibProfile> SampleProfiles(const FiniteGame& game,
                                       const CompressionMaps& maps,
                                       const SufficiencyOptions& options) {
  std::vector<SibProfile> out;
  out.push_back(UniformProfile(game, maps, options.cap));
  Rng rng(options.seed);
  for (int k = 0; k < options.samples; ++k) {
    out.push_back(RandomProfile(game, maps, rng, false, options.cap));
  }
  return out;
}

void AddViolation(SufficiencyReport* report, Violation v, int max_listed) {
  report->max_violation = std::max(report->max_violation, v.gap);
  // A tuple violated under several sampled profiles is listed once, with
  // its largest gap.
  int listed = 0;
  for (Violation& w : report->violations) {
    if (w.condition != v.condition) continue;
    if (w.t == v.t && w.agent == v.agent && w.tuple == v.tuple) {
      if (v.gap > w.gap) w = std::move(v);
      return;
    }
    ++listed;
  }
  if (listed < max_listed) report->violations.push_back(std::move(v));
}

}  // namespace

void SufficiencyReport::Merge(const SufficiencyReport& other) {
  total_zeta = Combine(total_zeta, other.total_zeta);
  update_consistency = Combine(update_consistency, other.update_consistency);
  belief_sufficiency = Combine(belief_sufficiency, other.belief_sufficiency);
  companion_ii = Combine(companion_ii, other.companion_ii);
  violations.insert(violations.end(), other.violations.begin(),
                    other.violations.end());
  max_violation = std::max(max_violation, other.max_violation);
  profiles_sampled = std::max(profiles_sampled, other.profiles_sampled);
  if (other.seed != 0) seed = other.seed;
}

bool SufficiencyReport::Passed() const {
  for (Verdict v :
       {total_zeta, update_consistency, belief_sufficiency, companion_ii}) {
    if (v == Verdict::kFail) return false;
  }
  return true;
}

SufficiencyReport VerifyZetaTotal(const FiniteGame& game,
                                  const CompressionMaps& maps) {
  SufficiencyReport report;
  report.total_zeta = Verdict::kPass;
  const HistorySpace space(game);
  auto fail = [&](int t, int i, const std::string& what) {
    report.total_zeta = Verdict::kFail;
    Violation v;
    v.condition = "i";
    v.t = t;
    v.agent = i;
    v.tuple = what;
    v.gap = 1;
    AddViolation(&report, std::move(v), 64);
  };
  if (static_cast<int>(maps.zeta.size()) != game.horizon) {
    fail(0, -1, "zeta table missing");
    return report;
  }
  for (int t = 0; t < game.horizon; ++t) {
    for (int i = 0; i < game.num_agents(); ++i) {
      const double expect = space.NumPrivate(t, i) * space.NumCommon(t);
      if (static_cast<double>(maps.zeta[t][i].size()) != expect) {
        fail(t, i, "zeta table does not cover every history");
        continue;
      }
      for (int s : maps.zeta[t][i]) {
        if (s < 0 || s >= maps.NumTypes(t, i)) {
          fail(t, i, "zeta maps outside S");
          break;
        }
      }
    }
  }
  return report;
}

SufficiencyReport VerifyUpdateConsistency(const FiniteGame& game,
                                          const CompressionMaps& maps,
                                          const SufficiencyOptions& options) {
  SufficiencyReport report = VerifyZetaTotal(game, maps);
  if (report.total_zeta == Verdict::kFail) {
    report.update_consistency = Verdict::kFail;
    return report;
  }
  report.total_zeta = Verdict::kNotChecked;
  report.violations.clear();
  report.update_consistency = Verdict::kPass;
  const HistorySpace space(game);
  for (int t = 0; t < game.horizon; ++t) {
    const int64_t nc = space.CommonCount(t, options.cap);
    for (int i = 0; i < game.num_agents(); ++i) {
      const int64_t np = space.PrivateCount(t, i, options.cap);
      std::set<int64_t> reported;
      for (int64_t p = 0; p < np; ++p) {
        for (int64_t c = 0; c < nc; ++c) {
          const int y = space.LastPrivateObs(t, i, p);
          const int z = space.LastCommonObs(t, c);
          int expected;
          int64_t phi_index;
          std::string tuple;
          if (t == 0) {
            phi_index = static_cast<int64_t>(y) * game.NumCommonObs(0) + z;
            expected = maps.phi[0][i][phi_index];
            tuple = "y=" + game.private_obs[0][i][y] +
                    " z=" + game.common_obs[0][z];
          } else {
            const int64_t pp = space.PrivatePrefix(t, i, p);
            const int64_t cp = space.CommonPrefix(t, c);
            const int a = space.LastAction(t, i, p);
            const int64_t ncp = space.CommonCount(t - 1, options.cap);
            const int s_prev = maps.Zeta(t - 1, i, pp, cp, ncp);
            phi_index = ((static_cast<int64_t>(s_prev) *
                              game.NumPrivateObs(t, i) +
                          y) *
                             game.NumCommonObs(t) +
                         z) *
                            game.NumActions(t - 1, i) +
                        a;
            expected = maps.phi[t][i][phi_index];
            tuple = "s_prev=" + maps.sets[t - 1][i][s_prev] +
                    " y=" + game.private_obs[t][i][y] +
                    " z=" + game.common_obs[t][z] +
                    " a_prev=" + game.actions[t - 1][i][a];
          }
          const int actual = maps.Zeta(t, i, p, c, nc);
          if (actual == expected) continue;
          report.update_consistency = Verdict::kFail;
          if (!reported.insert(phi_index).second) {
            report.max_violation = 1;
            continue;
          }
          Violation v;
          v.condition = "ii";
          v.t = t;
          v.agent = i;
          v.tuple = tuple + " (history " + space.PrivateLabel(t, i, p) +
                    " / " + space.CommonLabel(t, c) + ")";
          v.gap = 1;
          v.lhs = "zeta=" + maps.sets[t][i][actual];
          v.rhs = "phi=" + maps.sets[t][i][expected];
          AddViolation(&report, std::move(v), options.max_listed);
        }
      }
    }
  }
  return report;
}

SufficiencyReport VerifyBeliefSufficiency(const FiniteGame& game,
                                          const CompressionMaps& maps,
                                          const SufficiencyOptions& options) {
  SufficiencyReport report;
  const HistorySpace space(game);
  const bool exact = ZetaInjective(game, maps, space, options.cap);
  report.belief_sufficiency = exact ? Verdict::kPass : Verdict::kSampledPass;
  report.profiles_sampled = options.samples + 1;
  report.seed = options.seed;
  const std::vector<SibProfile> profiles = SampleProfiles(game, maps, options);
  const int n = game.num_agents();
  std::vector<int> wd(n + 2), od;
  for (size_t g = 0; g < profiles.size(); ++g) {
    const HistoryPolicy policy = SibHistoryPolicy(game, maps, profiles[g]);
    ForwardOptions fopts;
    fopts.cap = options.cap;
    const std::vector<WorldLayer> layers =
        ForwardWorlds(game, space, policy, fopts);
    for (const WorldLayer& layer : layers) {
      const int t = layer.t;
      const int64_t nc = space.CommonCount(t, options.cap);
      for (int i = 0; i < n; ++i) {
        const JointIndex others = maps.OtherTypeIndex(t, i);
        const int64_t no = others.size();
        const size_t width = game.NumStates(t) * no;
        od.resize(others.num_components());
        std::unordered_map<int64_t, std::vector<double>> by_h, by_s;
        for (int64_t w = 0; w < layer.layout.size(); ++w) {
          const double m = layer.mass[w];
          if (m == 0) continue;
          layer.layout.Decode(w, wd);
          const int x = layer.State(w);
          for (int j = 0, k = 0; j < n; ++j) {
            if (j != i) od[k++] = maps.Zeta(t, j, wd[j + 2], wd[1], nc);
          }
          const int64_t cell = x * no + others.Encode(od);
          const int64_t h = static_cast<int64_t>(wd[i + 2]) * nc + wd[1];
          const int64_t s =
              static_cast<int64_t>(maps.Zeta(t, i, wd[i + 2], wd[1], nc)) *
                  nc +
              wd[1];
          auto& vh = by_h[h];
          if (vh.empty()) vh.assign(width, 0.0);
          vh[cell] += m;
          auto& vs = by_s[s];
          if (vs.empty()) vs.assign(width, 0.0);
          vs[cell] += m;
        }
        for (auto& [key, v] : by_s) Normalize(&v);
        for (auto& [h, v] : by_h) {
          double mass = 0;
          for (double p : v) mass += p;
          if (mass <= kFeasibilityThreshold) continue;
          Normalize(&v);
          const int64_t p = h / nc, c = h % nc;
          const int s = maps.Zeta(t, i, p, c, nc);
          const std::vector<double>& ref = by_s[static_cast<int64_t>(s) * nc + c];
          const double gap = MaxGap(v, ref);
          if (gap <= options.tolerance) continue;
          report.belief_sufficiency = Verdict::kFail;
          Violation vio;
          vio.condition = "iii";
          vio.t = t;
          vio.agent = i;
          vio.tuple = "p=" + space.PrivateLabel(t, i, p) +
                      " c=" + space.CommonLabel(t, c) +
                      " s=" + maps.sets[t][i][s];
          vio.gap = gap;
          vio.lhs = RenderBelief(game, maps, t, i, v);
          vio.rhs = RenderBelief(game, maps, t, i, ref);
          vio.profile = static_cast<int>(g);
          AddViolation(&report, std::move(vio), options.max_listed);
        }
      }
    }
  }
  return report;
}

SufficiencyReport VerifyCompanionConditionII(
    const FiniteGame& game, const CompressionMaps& maps,
    const SufficiencyOptions& options) {
  SufficiencyReport report;
  const HistorySpace space(game);
  report.companion_ii = Verdict::kSampledPass;
  report.profiles_sampled = options.samples + 1;
  report.seed = options.seed;
  const std::vector<SibProfile> profiles = SampleProfiles(game, maps, options);
  const int n = game.num_agents();
  std::vector<int> wd(n + 2), ad(n), sd(n), snd(n);
  std::vector<std::vector<double>> probs(n);
  for (size_t g = 0; g < profiles.size(); ++g) {
    const HistoryPolicy policy = SibHistoryPolicy(game, maps, profiles[g]);
    ForwardOptions fopts;
    fopts.cap = options.cap;
    const std::vector<WorldLayer> layers =
        ForwardWorlds(game, space, policy, fopts);
    for (int t = 0; t + 1 < game.horizon; ++t) {
      const WorldLayer& layer = layers[t];
      const JointIndex types = maps.TypeIndex(t);
      const JointIndex next_types = maps.TypeIndex(t + 1);
      const JointIndex actions = game.ActionIndex(t);
      const JointIndex obs = game.ObsIndex(t + 1);
      const int64_t nc = space.CommonCount(t, options.cap);
      const int64_t ncn = space.CommonCount(t + 1, options.cap);
      const int nz = game.NumCommonObs(t + 1);
      const int64_t rest = layer.layout.size() / layer.layout.radix(0);
      std::map<int64_t, std::map<int64_t, double>> fine, coarse;
      std::map<int64_t, int64_t> fine_to_coarse;
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
        const int64_t s = types.Encode(sd);
        for (int64_t a = 0; a < actions.size(); ++a) {
          actions.Decode(a, ad);
          double wa = m;
          for (int j = 0; j < n && wa != 0; ++j) wa *= probs[j][ad[j]];
          if (wa == 0) continue;
          const int64_t fkey = (w % rest) * actions.size() + a;
          const int64_t ckey = (s * nc + wd[1]) * actions.size() + a;
          fine_to_coarse[fkey] = ckey;
          auto& fd = fine[fkey];
          auto& cd = coarse[ckey];
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
              const int64_t cn = space.ExtendCommon(t, wd[1], od[0]);
              for (int j = 0; j < n; ++j) {
                const int64_t pn =
                    space.ExtendPrivate(t, j, wd[j + 2], ad[j], od[j + 1]);
                snd[j] = maps.Zeta(t + 1, j, pn, cn, ncn);
              }
              const int64_t okey = next_types.Encode(snd) * nz + od[0];
              const double v = wa * px * orow[o];
              fd[okey] += v;
              cd[okey] += v;
            }
          }
        }
      }
      auto total = [](const std::map<int64_t, double>& d) {
        double s = 0;
        for (const auto& [k, v] : d) s += v;
        return s;
      };
      auto render = [&](const std::map<int64_t, double>& d, double mass) {
        std::string out;
        for (const auto& [k, v] : d) {
          if (!out.empty()) out += " ";
          const std::vector<int> digits = next_types.Decode(k / nz);
          out += "(";
          for (int j = 0; j < n; ++j) {
            out += (j ? "," : "") + maps.sets[t + 1][j][digits[j]];
          }
          out += ";z=" + game.common_obs[t + 1][k % nz] + ")=" + Num(v / mass);
        }
        return out;
      };
      for (const auto& [fkey, fd] : fine) {
        const double fm = total(fd);
        if (fm <= kFeasibilityThreshold) continue;
        const auto& cd = coarse[fine_to_coarse[fkey]];
        const double cm = total(cd);
        double gap = 0;
        for (const auto& [k, v] : cd) {
          auto it = fd.find(k);
          gap = std::max(gap,
                         std::abs((it == fd.end() ? 0.0 : it->second) / fm -
                                  v / cm));
        }
        if (gap <= options.tolerance) continue;
        report.companion_ii = Verdict::kFail;
        const int64_t a = fkey % actions.size();
        const int64_t wrest = fkey / actions.size();
        layer.layout.Decode(wrest, wd);  // state digit is zero here
        std::string tuple = "p=(";
        for (int j = 0; j < n; ++j) {
          tuple += (j ? "; " : "") + space.PrivateLabel(t, j, wd[j + 2]);
        }
        tuple += ") c=" + space.CommonLabel(t, wd[1]) + " a=(";
        actions.Decode(a, ad);
        for (int j = 0; j < n; ++j) {
          tuple += (j ? "," : "") + game.actions[t][j][ad[j]];
        }
        tuple += ")";
        Violation vio;
        vio.condition = "companion-ii";
        vio.t = t;
        vio.tuple = tuple;
        vio.gap = gap;
        vio.lhs = render(fd, fm);
        vio.rhs = render(cd, cm);
        vio.profile = static_cast<int>(g);
        AddViolation(&report, std::move(vio), options.max_listed);
      }
    }
  }
  return report;
}

SufficiencyReport VerifySufficiency(const FiniteGame& game,
                                    const CompressionMaps& maps,
                                    const SufficiencyOptions& options) {
  SufficiencyReport report = VerifyZetaTotal(game, maps);
  if (report.total_zeta == Verdict::kFail) return report;
  report.Merge(VerifyUpdateConsistency(game, maps, options));
  report.Merge(VerifyBeliefSufficiency(game, maps, options));
  return report;
}

double PolicyIndependenceCheck(
    const FiniteGame& game, const CompressionMaps& maps,
    const HistoryPolicy& others, int agent,
    const std::vector<TabularHistoryPolicy>& deviations, int64_t cap) {
  const int n = game.num_agents();
  const HistorySpace space(game);
  ForwardOptions fopts;
  fopts.cap = cap;
  std::vector<int> wd(n + 2), od;

  // Aggregates the law of (x, s^-i) by a key of agent i's information.
  auto aggregate = [&](const WorldLayer& layer, bool by_type) {
    const int t = layer.t;
    const int64_t nc = space.CommonCount(t, cap);
    const JointIndex other_types = maps.OtherTypeIndex(t, agent);
    const int64_t no = other_types.size();
    od.resize(other_types.num_components());
    std::unordered_map<int64_t, std::vector<double>> out;
    for (int64_t w = 0; w < layer.layout.size(); ++w) {
      const double m = layer.mass[w];
      if (m == 0) continue;
      layer.layout.Decode(w, wd);
      const int x = layer.State(w);
      for (int j = 0, k = 0; j < n; ++j) {
        if (j != agent) od[k++] = maps.Zeta(t, j, wd[j + 2], wd[1], nc);
      }
      const int64_t own =
          by_type ? maps.Zeta(t, agent, wd[agent + 2], wd[1], nc)
                  : wd[agent + 2];
      auto& v = out[own * nc + wd[1]];
      if (v.empty()) v.assign(game.NumStates(t) * no, 0.0);
      v[x * no + other_types.Encode(od)] += m;
    }
    return out;
  };

  HistoryPolicy uniform = CombinePolicies(
      agent,
      [](int, int, int64_t, int64_t, std::span<double> probs) {
        std::fill(probs.begin(), probs.end(), 1.0 / probs.size());
      },
      others);
  const std::vector<WorldLayer> ref_layers =
      ForwardWorlds(game, space, uniform, fopts);
  std::vector<std::unordered_map<int64_t, std::vector<double>>> reference;
  for (const WorldLayer& layer : ref_layers) {
    reference.push_back(aggregate(layer, true));
    for (auto& [k, v] : reference.back()) Normalize(&v);
  }

  double worst = 0;
  for (const TabularHistoryPolicy& dev : deviations) {
    const HistoryPolicy policy =
        CombinePolicies(agent, dev.AsPolicy(), others);
    const std::vector<WorldLayer> layers =
        ForwardWorlds(game, space, policy, fopts);
    for (const WorldLayer& layer : layers) {
      const int t = layer.t;
      const int64_t nc = space.CommonCount(t, cap);
      for (auto& [h, v] : aggregate(layer, false)) {
        double mass = 0;
        for (double p : v) mass += p;
        if (mass <= kFeasibilityThreshold) continue;
        Normalize(&v);
        const int64_t p = h / nc, c = h % nc;
        const int64_t key =
            static_cast<int64_t>(maps.Zeta(t, agent, p, c, nc)) * nc + c;
        auto it = reference[t].find(key);
        if (it == reference[t].end()) {
          worst = std::max(worst, 1.0);
          continue;
        }
        worst = std::max(worst, MaxGap(v, it->second));
      }
    }
  }
  return worst;
}

}  // namespace sibeq
