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

#include "sibeq/alice_bob.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sibeq/belief.h"

namespace sibeq {
namespace {

constexpr double kThird = 1.0 / 3.0;
const LabelSet kSigns = {"-1", "1"};
const LabelSet kNone = {"none"};

int Sign(int index) { return index == 0 ? -1 : 1; }
int SignIndex(int sign) { return sign < 0 ? 0 : 1; }

}  // namespace

FiniteGame MakeAliceBobGame(double c, double p, bool with_common_channel) {
  FiniteGame g;
  g.horizon = 2;
  g.agents = {"alice", "bob"};
  g.states = {kSigns, kSigns};
  g.actions = {{kSigns, kNone}, {kNone, kSigns}};
  g.private_obs = {{kSigns, kNone}, {kNone, kNone}};
  g.common_obs = {kNone, with_common_channel ? kSigns : kNone};
  g.initial = {0.5, 0.5};

  // t = 0: Alice reads x_1 exactly.
  g.observation.resize(2);
  g.observation[0] = Kernel(2, g.ObsIndex(0).size());
  const JointIndex obs0 = g.ObsIndex(0);
  for (int x = 0; x < 2; ++x) {
    const int digits[] = {0, x, 0};
    g.observation[0](x, obs0.Encode(digits)) = 1.0;
  }

  // x_2 = x_1 a.
  g.transition.resize(1);
  g.transition[0] = Kernel(2 * g.NumJointActions(0), 2);
  const JointIndex act0 = g.ActionIndex(0);
  for (int x = 0; x < 2; ++x) {
    for (int a = 0; a < 2; ++a) {
      const int digits[] = {a, 0};
      const int x2 = SignIndex(Sign(x) * Sign(a));
      g.transition[0](x * act0.size() + act0.Encode(digits), x2) = 1.0;
    }
  }

  // z = x_1 w, and x_1 = x_2 a.
  const JointIndex obs1 = g.ObsIndex(1);
  g.observation[1] = Kernel(2 * act0.size(), obs1.size());
  for (int x2 = 0; x2 < 2; ++x2) {
    for (int a = 0; a < 2; ++a) {
      const int digits[] = {a, 0};
      const int row = g.ObsRow(1, x2, act0.Encode(digits));
      if (!with_common_channel) {
        g.observation[1](row, 0) = 1.0;
        continue;
      }
      const int x1 = Sign(x2) * Sign(a);
      for (int z = 0; z < 2; ++z) {
        const int od[] = {z, 0, 0};
        g.observation[1](row, obs1.Encode(od)) =
            Sign(z) == x1 ? 1.0 - p : p;
      }
    }
  }

  g.utility.assign(2, std::vector<std::vector<double>>(2));
  for (int i = 0; i < 2; ++i) {
    g.utility[0][i].assign(2 * g.NumJointActions(0), 0.0);
    g.utility[1][i].assign(2 * g.NumJointActions(1), 0.0);
  }
  for (int x = 0; x < 2; ++x) {
    for (int a = 0; a < 2; ++a) {
      const int d0[] = {a, 0};
      const int idx0 = x * act0.size() + act0.Encode(d0);
      const double u1 = Sign(a) == 1 ? c : 0.0;
      g.utility[0][0][idx0] = u1;
      g.utility[0][1][idx0] = -u1;
      const JointIndex act1 = g.ActionIndex(1);
      const int d1[] = {0, a};
      const int idx1 = x * act1.size() + act1.Encode(d1);
      double u2 = 0;
      if (Sign(x) == 1 && Sign(a) == 1) u2 = 2;
      if (Sign(x) == -1 && Sign(a) == -1) u2 = 1;
      g.utility[1][0][idx1] = u2;
      g.utility[1][1][idx1] = -u2;
    }
  }
  return ValidateGame(std::move(g));
}

CompressionMaps AliceBobCompression(const FiniteGame& game) {
  CompressionMaps m;
  m.sets = {{kSigns, kNone}, {kSigns, kNone}};
  m.phi.resize(2);
  m.zeta.resize(2);
  // t = 0: s = y.
  m.phi[0] = {{0, 1}, {0}};
  // t = 1: s' = s a, independent of y (singleton) and z.
  const int nz = game.NumCommonObs(1);
  m.phi[1].resize(2);
  m.phi[1][0].resize(2 * nz * 2);
  for (int s = 0; s < 2; ++s) {
    for (int z = 0; z < nz; ++z) {
      for (int a = 0; a < 2; ++a) {
        m.phi[1][0][(s * nz + z) * 2 + a] = SignIndex(Sign(s) * Sign(a));
      }
    }
  }
  m.phi[1][1].assign(nz, 0);
  DeriveZetaFromPhi(game, &m);
  ValidateCompression(game, m);
  return m;
}

QBelief BayesQ(const Alpha& alpha, double p) {
  return {alpha[1] * p + alpha[0] * (1 - p), alpha[1] * (1 - p) + alpha[0] * p};
}

double RMinus(double alpha1, const QBelief& q, double c, double p) {
  return (1 + c) * (1 - alpha1) +
         (3 * alpha1 - 1) *
             ((1 - p) * BobThreshold(q[0]) + p * BobThreshold(q[1]));
}

double RPlus(double alpha2, const QBelief& q, double c, double p) {
  return 1 + (c - 1) * alpha2 +
         (3 * alpha2 - 1) *
             ((1 - p) * BobThreshold(q[1]) + p * BobThreshold(q[0]));
}

double AliceAugmentedPayoff(const Alpha& alpha,
                            const std::array<double, 2>& beta, double c,
                            double p) {
  const QBelief b = BayesQ(alpha, p);
  return 0.5 * c * (1 - alpha[0] + alpha[1]) +
         0.5 * (2 - alpha[0] - alpha[1]) + 0.5 * (3 * b[0] - 1) * beta[0] +
         0.5 * (3 * b[1] - 1) * beta[1];
}

double AgentZeroPayoff(const Alpha& alpha, const QBelief& q, double p) {
  const QBelief b = BayesQ(alpha, p);
  return -(q[0] - b[0]) * (q[0] - b[0]) - (q[1] - b[1]) * (q[1] - b[1]);
}

double FixedPointResidual(const Alpha& alpha, double c, double p) {
  const QBelief q = BayesQ(alpha, p);
  // Both payoffs are affine in the own weight, so pure deviations suffice.
  const double gm = std::max(RMinus(0, q, c, p), RMinus(1, q, c, p)) -
                    RMinus(alpha[0], q, c, p);
  const double gp = std::max(RPlus(0, q, c, p), RPlus(1, q, c, p)) -
                    RPlus(alpha[1], q, c, p);
  return std::max({gm, gp, 0.0});
}

AugmentedSolution AugmentedStageSolve(double c, double p, int resolution) {
  AugmentedSolution best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= resolution; ++i) {
    for (int j = 0; j <= resolution; ++j) {
      const Alpha a = {static_cast<double>(i) / resolution,
                       static_cast<double>(j) / resolution};
      const double r = FixedPointResidual(a, c, p);
      if (r < best.residual) {
        best.alpha = a;
        best.residual = r;
      }
    }
  }
  double step = 0.5 / resolution;
  while (best.residual > 0 && step > 1e-13) {
    bool improved = false;
    for (int k = 0; k < 2; ++k) {
      for (double dir : {-1.0, 1.0}) {
        Alpha a = best.alpha;
        a[k] = std::clamp(a[k] + dir * step, 0.0, 1.0);
        const double r = FixedPointResidual(a, c, p);
        if (r < best.residual) {
          best.alpha = a;
          best.residual = r;
          improved = true;
        }
      }
    }
    if (!improved) step /= 2;
  }
  best.q = BayesQ(best.alpha, p);
  return best;
}

SibProfile AliceBobProfile(const FiniteGame& game, const CompressionMaps& maps,
                           const Alpha& alpha, bool flip_bob) {
  SibProfile sigma = UniformProfile(game, maps);
  StageStrategy& s0 = sigma.stages[0][0];
  s0.MutableProb(0, 0, 0) = alpha[0];
  s0.MutableProb(0, 0, 1) = 1 - alpha[0];
  s0.MutableProb(0, 1, 1) = alpha[1];
  s0.MutableProb(0, 1, 0) = 1 - alpha[1];
  const BeliefTree tree = BuildBeliefTree(game, maps, sigma);
  const int64_t ns = maps.TypeIndex(1).size();
  for (int64_t c = 0; c < tree.NumNodes(1); ++c) {
    const auto& pi = tree.levels[1][c].belief.per_agent[1];
    double q = 0;
    for (int64_t s = 0; s < ns; ++s) q += pi[1 * ns + s];
    double beta = BobThreshold(q);
    if (flip_bob) beta = 1 - beta;
    sigma.stages[1][c].MutableProb(1, 0, 1) = beta;
    sigma.stages[1][c].MutableProb(1, 0, 0) = 1 - beta;
  }
  return sigma;
}

Alpha ExtractAlpha(const SibProfile& profile) {
  const StageStrategy& s0 = profile.stages[0][0];
  return {s0.Prob(0, 0, 0), s0.Prob(0, 1, 1)};
}

QBelief ExtractQ(const FiniteGame& game, const CompressionMaps& maps,
                 const SibProfile& profile) {
  BeliefTreeOptions options;
  options.last_t = 1;
  const BeliefTree tree = BuildBeliefTree(game, maps, profile, options);
  const int64_t ns = maps.TypeIndex(1).size();
  QBelief q{};
  for (int64_t c = 0; c < std::min<int64_t>(2, tree.NumNodes(1)); ++c) {
    const auto& pi = tree.levels[1][c].belief.per_agent[1];
    for (int64_t s = 0; s < ns; ++s) q[c] += pi[1 * ns + s];
  }
  if (tree.NumNodes(1) == 1) q[1] = q[0];
  return q;
}

namespace {

constexpr double kMargin = 1e-6;

// Worst-case gain of the securing deviation (0, 1) over every Bob response
// compatible with a neighborhood of qbar: a coordinate away from 1/3 keeps
// its threshold response, a coordinate at 1/3 may take either.
double SecuringGain(const Alpha& abar, const QBelief& qbar, double c,
                    double p) {
  const Alpha target = {0.0, 1.0};
  auto choices = [](double q) -> std::vector<double> {
    if (std::abs(q - kThird) < 1e-12) return {0.0, 1.0};
    return {BobThreshold(q)};
  };
  double worst = std::numeric_limits<double>::infinity();
  for (double bm : choices(qbar[0])) {
    for (double bp : choices(qbar[1])) {
      // Current payoff: Bob's weight at a 1/3 coordinate is free.
      double current = -std::numeric_limits<double>::infinity();
      for (double cm : choices(qbar[0])) {
        for (double cp : choices(qbar[1])) {
          current = std::max(current,
                             AliceAugmentedPayoff(abar, {cm, cp}, c, p));
        }
      }
      worst = std::min(worst,
                       AliceAugmentedPayoff(target, {bm, bp}, c, p) - current);
    }
  }
  return worst;
}

void Record(SecureCaseResult* r, double gain, double bound, double slice) {
  if (r->points == 0) {
    r->min_gain = gain;
    r->min_bound = bound;
    r->min_slice = slice;
  }
  r->min_gain = std::min(r->min_gain, gain);
  r->min_bound = std::min(r->min_bound, bound);
  r->min_slice = std::min(r->min_slice, slice);
  ++r->points;
}

}  // namespace

std::vector<SecureCaseResult> BetterReplySecureCheck(double c,
                                                     int points_per_case,
                                                     double p) {
  std::vector<SecureCaseResult> out(5);
  const int n = points_per_case;

  // Case (i): q off the Bayes image; agent 0 restores it.
  {
    SecureCaseResult& r = out[0];
    r.name = "i";
    for (int k = 0; k < n; ++k) {
      const Alpha abar = {(k % 7) / 6.0, ((k / 7) % 8) / 7.0};
      const QBelief b = BayesQ(abar, p);
      const double shift = 0.05 * (1 + k % 3);
      const QBelief qbar = {b[0] + (b[0] < 0.5 ? shift : -shift), b[1]};
      const double before = AgentZeroPayoff(abar, qbar, p);
      // The deviation q = B(alpha) is exact for every nearby alpha.
      double after = 0;
      for (double d : {-1e-3, 0.0, 1e-3}) {
        const Alpha near = {std::clamp(abar[0] + d, 0.0, 1.0),
                            std::clamp(abar[1] - d, 0.0, 1.0)};
        after = std::min(after, AgentZeroPayoff(near, BayesQ(near, p), p));
      }
      const double eps = -before / 2;
      const double gain = after - before - eps;
      Record(&r, gain, gain, 0);
      if (before < 0 && gain > 0) ++r.passed;
    }
  }

  // Case (ii): Bayes-consistent, both beliefs away from 1/3, Alice not at a
  // best response.
  {
    SecureCaseResult& r = out[1];
    r.name = "ii";
    for (int i = 0; i <= 10 && r.points < n; ++i) {
      for (int j = 0; j <= 10 && r.points < n; ++j) {
        const Alpha abar = {i / 10.0, j / 10.0};
        const QBelief q = BayesQ(abar, p);
        if (std::abs(q[0] - kThird) < 1e-9 || std::abs(q[1] - kThird) < 1e-9) {
          continue;
        }
        const std::array<double, 2> beta = {BobThreshold(q[0]),
                                            BobThreshold(q[1])};
        double best = -std::numeric_limits<double>::infinity();
        for (double a1 : {0.0, 1.0}) {
          for (double a2 : {0.0, 1.0}) {
            best = std::max(best, AliceAugmentedPayoff({a1, a2}, beta, c, p));
          }
        }
        const double gap = best - AliceAugmentedPayoff(abar, beta, c, p);
        if (gap <= 1e-12) continue;  // an equilibrium, not in scope
        const double gain = gap - gap / 2;
        Record(&r, gain, gain, 0);
        if (gain > 0) ++r.passed;
      }
    }
  }

  // Case (iii): q_-1 = 1/3, q_1 != 1/3; slice alpha_1 = 5/12 - alpha_2 / 4.
  {
    SecureCaseResult& r = out[2];
    r.name = "iii";
    for (int k = 0; k < n; ++k) {
      const double a2 = static_cast<double>(k) / (n - 1);
      const Alpha abar = {5.0 / 12 - a2 / 4, a2};
      const QBelief q = BayesQ(abar, p);
      if (std::abs(q[1] - kThird) < 1e-12) continue;
      const double slice = 1 + abar[0] - abar[1];
      const double gain = SecuringGain(abar, q, c, p) - kMargin;
      const double bound = 0.5 * c * slice - 0.5 * 3 - 0.2 - 0.5 * 0.6 -
                           kMargin;
      Record(&r, gain, bound, slice);
      if (gain > 0 && bound > 0 && slice >= 1.0 / 6 - 1e-12) ++r.passed;
    }
  }

  // Case (iv): q_1 = 1/3, q_-1 != 1/3; slice alpha_2 = 5/12 - alpha_1 / 4.
  {
    SecureCaseResult& r = out[3];
    r.name = "iv";
    for (int k = 0; k < n; ++k) {
      const double a1 = static_cast<double>(k) / (n - 1);
      const Alpha abar = {a1, 5.0 / 12 - a1 / 4};
      const QBelief q = BayesQ(abar, p);
      if (std::abs(q[0] - kThird) < 1e-12) continue;
      const double slice = 1 + abar[0] - abar[1];
      const double gain = SecuringGain(abar, q, c, p) - kMargin;
      const double bound = 0.5 * c * slice - 0.5 * 3 - 0.5 * 2.4 - kMargin;
      Record(&r, gain, bound, slice);
      if (gain > 0 && bound > 0 && slice >= 7.0 / 12 - 1e-12) ++r.passed;
    }
  }

  // Case (v): both beliefs at 1/3, which pins alpha = (1/3, 1/3). The grid
  // runs over belief perturbations in the securing neighborhood.
  {
    SecureCaseResult& r = out[4];
    r.name = "v";
    const Alpha abar = {kThird, kThird};
    const QBelief q = BayesQ(abar, p);
    const double slice = 1 + abar[0] - abar[1];
    for (int k = 0; k < n; ++k) {
      const double angle = 2 * M_PI * k / n;
      const QBelief qt = {q[0] + 1e-4 * std::cos(angle),
                          q[1] + 1e-4 * std::sin(angle)};
      const std::array<double, 2> beta_t = {BobThreshold(qt[0]),
                                            BobThreshold(qt[1])};
      double current = -std::numeric_limits<double>::infinity();
      for (double cm : {0.0, 1.0}) {
        for (double cp : {0.0, 1.0}) {
          current = std::max(current,
                             AliceAugmentedPayoff(abar, {cm, cp}, c, p));
        }
      }
      const double gain =
          AliceAugmentedPayoff({0.0, 1.0}, beta_t, c, p) - current - kMargin;
      const double bound = 0.5 * c * slice - 0.5 * 3 - 0.2 - kMargin;
      Record(&r, gain, bound, slice);
      if (gain > 0 && bound > 0) ++r.passed;
    }
  }
  return out;
}

}  // namespace sibeq
