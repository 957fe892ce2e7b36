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
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "oracle.h"
#include "sibeq/alice_bob.h"
#include "sibeq/belief.h"
#include "sibeq/compression.h"
#include "sibeq/errors.h"
#include "sibeq/profile.h"
#include "sibeq/random_games.h"
#include "sibeq/solver.h"
#include "sibeq/verification.h"

namespace sibeq {
namespace {

double Gain(const FiniteGame& g, const CompressionMaps& m,
            const SibProfile& sigma, int i) {
  const HistoryPolicy policy = SibHistoryPolicy(g, m, sigma);
  return oracle::BestResponseValue(g, policy, i) -
         oracle::BestResponseValue(g, policy, i, true);
}

TEST(SequentialDecompositionTest, ZeroUtilitiesGiveZeroValues) {
  Rng rng(81);
  for (int k = 0; k < 6; ++k) {
    RandomGameOptions opts;
    opts.horizon = 1 + k % 3;
    const FiniteGame g = ZeroUtilityGame(RandomGame(rng, opts));
    const CompressionMaps m = IdentityCompression(g);
    const Decomposition d =
        SequentialDecomposition(g, m, RandomProfile(g, m, rng));
    for (const auto& level : d.values) {
      for (const auto& node : level) {
        for (const auto& agent : node) {
          for (double v : agent) EXPECT_EQ(v, 0.0);
        }
      }
    }
    EXPECT_EQ(d.max_residual, 0.0);
  }
}

// With one agent the decomposition is plain dynamic programming, so the
// root value of the solution equals the optimal POMDP value.
TEST(SequentialDecompositionTest, SingleAgentRootValueIsOptimal) {
  Rng rng(82);
  for (int k = 0; k < 6; ++k) {
    RandomGameOptions opts;
    opts.agents = 1;
    opts.horizon = 1 + k % 3;
    const FiniteGame g = RandomGame(rng, opts);
    const CompressionMaps m = IdentityCompression(g);
    const SolveReport r = FixedPointSearch(g, m, SearchMethod::kIterate);
    ASSERT_EQ(r.status, SolveStatus::kEquilibrium);
    // Root nodes are indexed by z_0; weight each by its probability.
    const std::vector<double> f0 = InitialF(g, m);
    const int nz = g.NumCommonObs(0);
    double value = 0;
    for (int z = 0; z < nz; ++z) {
      double pz = 0;
      for (size_t e = z; e < f0.size(); e += nz) pz += f0[e];
      if (pz == 0) continue;
      const auto& root = r.decomposition.tree.levels[0][z].belief.per_agent[0];
      const auto mass = TypeMarginal(g, m, 0, 0, root);
      for (size_t s = 0; s < mass.size(); ++s) {
        value += pz * mass[s] * r.decomposition.values[0][z][0][s];
      }
    }
    const PomdpResult dp =
        PomdpBestResponse(g, m, r.sigma, r.decomposition.tree, 0);
    EXPECT_NEAR(value, dp.value, 1e-9);
    const HistoryPolicy policy = SibHistoryPolicy(g, m, r.sigma);
    EXPECT_NEAR(value, oracle::BestResponseValue(g, policy, 0), 1e-9);
  }
}

// Every profile reported as an equilibrium survives the reference
// best-response computation.
TEST(FixedPointSearchTest, EquilibriaAreSound) {
  Rng rng(83);
  int found = 0;
  for (int k = 0; k < 12; ++k) {
    RandomGameOptions opts;
    opts.horizon = 1 + k % 3;
    const FiniteGame g = RandomGame(rng, opts);
    const CompressionMaps m = IdentityCompression(g);
    SolverOptions so;
    so.seed = 100 + k;
    const SolveReport r = FixedPointSearch(g, m, SearchMethod::kIterate, so);
    if (r.status != SolveStatus::kEquilibrium) {
      EXPECT_TRUE(r.status == SolveStatus::kNoFixedPoint ||
                  r.status == SolveStatus::kUncertified);
      continue;
    }
    ++found;
    EXPECT_LE(r.residual(), so.eps_fp);
    ASSERT_TRUE(r.certification.has_value());
    EXPECT_TRUE(r.certification->certified);
    for (int i = 0; i < g.num_agents(); ++i) {
      EXPECT_LE(Gain(g, m, r.sigma, i), so.eps_bne);
    }
  }
  EXPECT_GT(found, 0);
}

TEST(FixedPointSearchTest, OneShotMatchingPennies) {
  FiniteGame g;
  g.horizon = 1;
  g.agents = {"row", "col"};
  g.states = {{"s"}};
  g.actions = {{{"h", "t"}, {"h", "t"}}};
  g.private_obs = {{{"none"}, {"none"}}};
  g.common_obs = {{"none"}};
  g.initial = {1.0};
  g.observation = {Kernel(1, 1)};
  g.observation[0](0, 0) = 1.0;
  g.utility = {{{1, -1, -1, 1}, {-1, 1, 1, -1}}};
  g = ValidateGame(g);
  const CompressionMaps m = IdentityCompression(g);
  const SolveReport r = FixedPointSearch(g, m, SearchMethod::kIterate);
  ASSERT_EQ(r.status, SolveStatus::kEquilibrium);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(r.sigma.stages[0][0].Prob(i, 0, 0), 0.5, 1e-9);
  }
}

class SignalingMethodTest : public ::testing::TestWithParam<SearchMethod> {};

TEST_P(SignalingMethodTest, FindsTheEquilibriumAtLargeCost) {
  const FiniteGame g = MakeAliceBobGame(25);
  const CompressionMaps m = AliceBobCompression(g);
  const SolveReport r = FixedPointSearch(g, m, GetParam());
  ASSERT_EQ(r.status, SolveStatus::kEquilibrium) << r.method;
  const Alpha alpha = ExtractAlpha(r.sigma);
  EXPECT_LE(FixedPointResidual(alpha, 25), 1e-9);
  EXPECT_LE(Gain(g, m, r.sigma, 0), 1e-6);
  EXPECT_LE(Gain(g, m, r.sigma, 1), 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Methods, SignalingMethodTest,
                         ::testing::Values(SearchMethod::kIterate,
                                           SearchMethod::kGrid,
                                           SearchMethod::kAugmented));

TEST(FixedPointSearchTest, ZeroCostReportsNoFixedPoint) {
  const FiniteGame g = MakeAliceBobGame(0);
  const CompressionMaps m = AliceBobCompression(g);
  SolverOptions opts;
  opts.max_iter = 10;
  const SolveReport r = FixedPointSearch(g, m, SearchMethod::kIterate, opts);
  EXPECT_NE(r.status, SolveStatus::kEquilibrium);
  EXPECT_GT(r.residual(), opts.eps_fp);
}

TEST(FixedPointSearchTest, DeterministicAcrossRunsAndWorkers) {
  Rng rng(84);
  RandomGameOptions gopts;
  gopts.horizon = 2;
  const FiniteGame g = RandomGame(rng, gopts);
  const CompressionMaps m = IdentityCompression(g);
  SolverOptions one;
  one.workers = 1;
  SolverOptions four = one;
  four.workers = 4;
  const SolveReport a = FixedPointSearch(g, m, SearchMethod::kIterate, one);
  const SolveReport b = FixedPointSearch(g, m, SearchMethod::kIterate, one);
  const SolveReport c = FixedPointSearch(g, m, SearchMethod::kIterate, four);
  EXPECT_EQ(a.sigma, b.sigma);
  EXPECT_EQ(a.sigma, c.sigma);
  EXPECT_EQ(a.residual(), c.residual());
}

TEST(FixedPointSearchTest, StageBneThatDiffersFromSigmaIsNotAnEquilibrium) {
  const FiniteGame g = MakeAliceBobGame(25);
  const CompressionMaps m = AliceBobCompression(g);
  const SibProfile flipped = AliceBobProfile(g, m, {0.0, 1.0}, true);
  const SolveReport r = EvaluateCandidate(g, m, flipped, SolverOptions{});
  EXPECT_EQ(r.status, SolveStatus::kNoFixedPoint);
  EXPECT_GT(r.residual(), 0.5);
}

TEST(FixedPointSearchTest, AugmentedNeedsTwoPeriods) {
  Rng rng(85);
  RandomGameOptions opts;
  opts.horizon = 3;
  const FiniteGame g = RandomGame(rng, opts);
  EXPECT_THROW(FixedPointSearch(g, IdentityCompression(g),
                                SearchMethod::kAugmented),
               NotApplicable);
}

TEST(FixedPointSearchTest, GridRejectsLargeLeadingStages) {
  Rng rng(86);
  RandomGameOptions opts;
  opts.horizon = 2;
  opts.max_actions = 3;
  opts.max_private_obs = 3;
  FiniteGame g;
  // Draw until the first stage has more than two free parameters.
  for (;;) {
    g = RandomGame(rng, opts);
    int params = 0;
    for (int i = 0; i < 2; ++i) {
      params += (g.NumActions(0, i) - 1) * g.NumPrivateObs(0, i) *
                g.NumCommonObs(0);
    }
    if (params > 2) break;
  }
  EXPECT_THROW(FixedPointSearch(g, IdentityCompression(g), SearchMethod::kGrid),
               NotApplicable);
}

TEST(FixedPointSearchTest, ParseMethodRejectsUnknownNames) {
  EXPECT_EQ(ParseMethod("grid"), SearchMethod::kGrid);
  EXPECT_THROW(ParseMethod("simplex"), NotApplicable);
}

TEST(SolveNoCommonObsTest, SignalingGameWithoutChannel) {
  const FiniteGame g = MakeAliceBobGame(25, 0.2, false);
  const CompressionMaps m = AliceBobCompression(g);
  const SolveReport r = SolveNoCommonObs(g, m);
  EXPECT_EQ(r.decomposition.tree.FallbackCount(), 0);
  ASSERT_EQ(r.status, SolveStatus::kEquilibrium);
  bool noted = false;
  for (const auto& n : r.notes) {
    noted |= n.find("perfect Bayesian") != std::string::npos;
  }
  EXPECT_TRUE(noted);
  EXPECT_LE(Gain(g, m, r.sigma, 0), 1e-6);
  EXPECT_LE(Gain(g, m, r.sigma, 1), 1e-6);
}

TEST(SolveNoCommonObsTest, RejectsCommonObservations) {
  const FiniteGame g = MakeAliceBobGame(25);
  EXPECT_THROW(SolveNoCommonObs(g, AliceBobCompression(g)), NotApplicable);
}

TEST(ResolveWorkersTest, ExplicitRequestWins) {
  EXPECT_EQ(ResolveWorkers(3), 3);
  EXPECT_GE(ResolveWorkers(0), 1);
}

}  // namespace
}  // namespace sibeq
