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

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "sibeq/alice_bob.h"
#include "sibeq/belief.h"
#include "sibeq/compression.h"
#include "sibeq/profile.h"
#include "sibeq/random_games.h"
#include "sibeq/stage_game.h"

namespace sibeq {
namespace {

// One-shot two-agent game with a single state and no observations.
// payoff[i][a0][a1].
FiniteGame MatrixGame(const std::vector<std::vector<std::vector<double>>>& u) {
  FiniteGame g;
  g.horizon = 1;
  g.agents = {"row", "col"};
  g.states = {{"s"}};
  LabelSet ra, ca;
  for (size_t a = 0; a < u[0].size(); ++a) ra.push_back("r" + std::to_string(a));
  for (size_t a = 0; a < u[0][0].size(); ++a) ca.push_back("c" + std::to_string(a));
  g.actions = {{ra, ca}};
  g.private_obs = {{{"none"}, {"none"}}};
  g.common_obs = {{"none"}};
  g.initial = {1.0};
  g.observation = {Kernel(1, 1)};
  g.observation[0](0, 0) = 1.0;
  g.utility.assign(1, std::vector<std::vector<double>>(2));
  for (int i = 0; i < 2; ++i) {
    for (size_t a = 0; a < ra.size(); ++a) {
      for (size_t b = 0; b < ca.size(); ++b) {
        g.utility[0][i].push_back(u[i][a][b]);
      }
    }
  }
  return ValidateGame(g);
}

StageGame RootStage(const FiniteGame& g, const CompressionMaps& m) {
  const BeliefTree tree = BuildBeliefTree(g, m, UniformProfile(g, m));
  return StageGame(g, m, 0, tree.levels[0][0].belief, {});
}

TEST(SolveStageBneTest, MatchingPenniesHasTheUniformEquilibrium) {
  const FiniteGame g = MatrixGame({{{1, -1}, {-1, 1}}, {{-1, 1}, {1, -1}}});
  const CompressionMaps m = IdentityCompression(g);
  const StageGame stage = RootStage(g, m);
  const StageSolution sol = SolveStageBne(stage);
  ASSERT_EQ(sol.equilibria.size(), 1u);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(sol.equilibria[0].Prob(i, 0, 0), 0.5, 1e-12);
    EXPECT_NEAR(sol.equilibria[0].Prob(i, 0, 1), 0.5, 1e-12);
  }
  EXPECT_LE(stage.Regret(sol.equilibria[0]), 1e-9);
  EXPECT_NEAR(ValueUpdate(stage, sol.equilibria[0])[0][0], 0.0, 1e-12);
}

TEST(SolveStageBneTest, PrisonersDilemmaDefects) {
  const FiniteGame g = MatrixGame({{{3, 0}, {5, 1}}, {{3, 5}, {0, 1}}});
  const CompressionMaps m = IdentityCompression(g);
  const StageSolution sol = SolveStageBne(RootStage(g, m));
  ASSERT_EQ(sol.equilibria.size(), 1u);
  EXPECT_EQ(sol.equilibria[0].Prob(0, 0, 1), 1.0);
  EXPECT_EQ(sol.equilibria[0].Prob(1, 0, 1), 1.0);
  EXPECT_TRUE(sol.ties[0].empty());
}

TEST(SolveStageBneTest, CoordinationGameHasThreeEquilibria) {
  const FiniteGame g = MatrixGame({{{2, 0}, {0, 1}}, {{2, 0}, {0, 1}}});
  const CompressionMaps m = IdentityCompression(g);
  const StageGame stage = RootStage(g, m);
  const StageSolution sol = SolveStageBne(stage);
  ASSERT_EQ(sol.equilibria.size(), 3u);
  int mixed = 0;
  for (size_t e = 0; e < sol.equilibria.size(); ++e) {
    EXPECT_LE(stage.Regret(sol.equilibria[e]), 1e-9);
    const double p = sol.equilibria[e].Prob(0, 0, 0);
    if (p > 0 && p < 1) {
      ++mixed;
      EXPECT_NEAR(p, 1.0 / 3.0, 1e-9);
      EXPECT_EQ(sol.ties[e].size(), 2u);
    }
  }
  EXPECT_EQ(mixed, 1);
}

TEST(SolveStageBneTest, RandomBayesianGamesHaveSmallRegret) {
  Rng rng(51);
  for (int k = 0; k < 20; ++k) {
    RandomGameOptions opts;
    opts.horizon = 1;
    opts.agents = 2 + (k % 4 == 3 ? 1 : 0);
    const FiniteGame g = RandomGame(rng, opts);
    const CompressionMaps m = IdentityCompression(g);
    const StageGame stage = RootStage(g, m);
    const StageSolution sol = SolveStageBne(stage);
    ASSERT_FALSE(sol.equilibria.empty());
    for (const StageStrategy& s : sol.equilibria) {
      EXPECT_LE(stage.Regret(s), 1e-8);
    }
  }
}

TEST(StageGameTest, ContinuationPayoffsMatchClosedForm) {
  const double c = 25;
  const FiniteGame g = MakeAliceBobGame(c);
  const CompressionMaps m = AliceBobCompression(g);
  const Alpha alpha = {0.3, 0.6};
  const SibProfile sigma = AliceBobProfile(g, m, alpha);
  const BeliefTree tree = BuildBeliefTree(g, m, sigma);
  ChildValues children;
  for (int z = 0; z < 2; ++z) {
    const StageGame child(g, m, 1, tree.levels[1][z].belief, {});
    children.push_back(ValueUpdate(child, sigma.stages[1][z]));
  }
  const StageGame root(g, m, 0, tree.levels[0][0].belief, children);
  const QBelief q = BayesQ(alpha);
  std::vector<double> r(2);
  // Type "-1": action "-1" keeps the state (alpha_1 = 1), action "1" flips.
  root.InterimPayoffs(0, 0, sigma.stages[0][0], r);
  EXPECT_NEAR(r[0], RMinus(1.0, q, c), 1e-12);
  EXPECT_NEAR(r[1], RMinus(0.0, q, c), 1e-12);
  root.InterimPayoffs(0, 1, sigma.stages[0][0], r);
  EXPECT_NEAR(r[1], RPlus(1.0, q, c), 1e-12);
  EXPECT_NEAR(r[0], RPlus(0.0, q, c), 1e-12);
}

TEST(StageGameTest, FindTiesFlagsIndifferentTypes) {
  const FiniteGame g = MatrixGame({{{1, 1}, {0, 0}}, {{0, 0}, {0, 0}}});
  const CompressionMaps m = IdentityCompression(g);
  const StageGame stage = RootStage(g, m);
  const StageStrategy sigma = stage.UniformStrategy();
  const auto ties = FindTies(stage, sigma, 1e-9);
  // The column agent is indifferent; the row agent strictly prefers r0.
  ASSERT_EQ(ties.size(), 1u);
  EXPECT_EQ(ties[0].agent, 1);
  EXPECT_EQ(ties[0].actions.size(), 2u);
}

TEST(ValueUpdateTest, ZeroUtilitiesGiveZeroValues) {
  Rng rng(52);
  RandomGameOptions opts;
  opts.horizon = 1;
  const FiniteGame g = ZeroUtilityGame(RandomGame(rng, opts));
  const CompressionMaps m = IdentityCompression(g);
  const StageGame stage = RootStage(g, m);
  const auto v = ValueUpdate(stage, stage.UniformStrategy());
  for (const auto& agent : v) {
    for (double x : agent) EXPECT_EQ(x, 0.0);
  }
}

}  // namespace
}  // namespace sibeq
