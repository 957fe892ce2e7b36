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
#include "oracle.h"
#include "sibeq/alice_bob.h"
#include "sibeq/belief.h"
#include "sibeq/compression.h"
#include "sibeq/errors.h"
#include "sibeq/profile.h"
#include "sibeq/random_games.h"
#include "sibeq/verification.h"

namespace sibeq {
namespace {

struct Case {
  FiniteGame game;
  CompressionMaps maps;
  SibProfile sigma;
};

Case RandomCase(Rng& rng, int horizon, int agents = 2) {
  RandomGameOptions opts;
  opts.horizon = horizon;
  opts.agents = agents;
  Case c;
  c.game = RandomGame(rng, opts);
  c.maps = IdentityCompression(c.game);
  c.sigma = RandomProfile(c.game, c.maps, rng);
  return c;
}

TEST(BruteForceTest, MatchesReferenceBackwardInduction) {
  Rng rng(61);
  for (int k = 0; k < 12; ++k) {
    const Case c = RandomCase(rng, 1 + k % 3);
    const HistoryPolicy policy = SibHistoryPolicy(c.game, c.maps, c.sigma);
    for (int i = 0; i < 2; ++i) {
      const DeviationResult r =
          BruteForceBestResponse(c.game, c.maps, c.sigma, i);
      EXPECT_NEAR(r.best_value, oracle::BestResponseValue(c.game, policy, i),
                  1e-9);
      EXPECT_NEAR(r.equilibrium_value,
                  oracle::BestResponseValue(c.game, policy, i, true), 1e-9);
      EXPECT_GE(r.gain, -1e-12);
    }
  }
}

TEST(BruteForceTest, EnumerationAndBackwardInductionAgree) {
  Rng rng(62);
  for (int k = 0; k < 8; ++k) {
    RandomGameOptions opts;
    opts.horizon = 2;
    opts.max_states = 2;
    opts.max_actions = 2;
    opts.max_private_obs = 2;
    opts.max_common_obs = 1;
    Case c;
    c.game = RandomGame(rng, opts);
    c.maps = IdentityCompression(c.game);
    c.sigma = RandomProfile(c.game, c.maps, rng);
    for (int i = 0; i < 2; ++i) {
      BestResponseOptions enumerate;
      enumerate.mode = BestResponseMode::kEnumerate;
      BestResponseOptions backward;
      backward.mode = BestResponseMode::kBackward;
      const auto a = BruteForceBestResponse(c.game, c.maps, c.sigma, i, enumerate);
      const auto b = BruteForceBestResponse(c.game, c.maps, c.sigma, i, backward);
      EXPECT_EQ(a.mode_used, BestResponseMode::kEnumerate);
      EXPECT_EQ(b.mode_used, BestResponseMode::kBackward);
      EXPECT_NEAR(a.best_value, b.best_value, 1e-9);
    }
  }
}

TEST(BruteForceTest, ArgmaxAttainsTheBestValue) {
  Rng rng(63);
  const Case c = RandomCase(rng, 2);
  const HistoryPolicy others = SibHistoryPolicy(c.game, c.maps, c.sigma);
  for (int i = 0; i < 2; ++i) {
    const DeviationResult r = BruteForceBestResponse(c.game, c.maps, c.sigma, i);
    const HistoryPolicy dev = CombinePolicies(i, r.argmax.AsPolicy(), others);
    EXPECT_NEAR(oracle::ExpectedUtility(c.game, dev)[i], r.best_value, 1e-9);
  }
}

TEST(BruteForceTest, EnumerationCapRaises) {
  Rng rng(64);
  const Case c = RandomCase(rng, 3);
  BestResponseOptions opts;
  opts.mode = BestResponseMode::kEnumerate;
  opts.strategy_cap = 4;
  EXPECT_THROW(BruteForceBestResponse(c.game, c.maps, c.sigma, 0, opts),
               ExplosionError);
}

TEST(BruteForceTest, WorkersDoNotChangeTheResult) {
  Rng rng(65);
  RandomGameOptions gopts;
  gopts.horizon = 2;
  gopts.max_common_obs = 1;
  gopts.max_private_obs = 2;
  gopts.max_actions = 2;
  Case c;
  c.game = RandomGame(rng, gopts);
  c.maps = IdentityCompression(c.game);
  c.sigma = RandomProfile(c.game, c.maps, rng);
  BestResponseOptions one;
  one.mode = BestResponseMode::kEnumerate;
  BestResponseOptions four = one;
  four.workers = 4;
  for (int i = 0; i < 2; ++i) {
    const auto a = BruteForceBestResponse(c.game, c.maps, c.sigma, i, one);
    const auto b = BruteForceBestResponse(c.game, c.maps, c.sigma, i, four);
    EXPECT_EQ(a.best_value, b.best_value);
  }
}

TEST(PomdpTest, MatchesBruteForce) {
  Rng rng(66);
  for (int k = 0; k < 12; ++k) {
    const Case c = RandomCase(rng, 1 + k % 3);
    const BeliefTree tree = BuildBeliefTree(c.game, c.maps, c.sigma);
    for (int i = 0; i < 2; ++i) {
      const PomdpResult dp = PomdpBestResponse(c.game, c.maps, c.sigma, tree, i);
      const DeviationResult bf =
          BruteForceBestResponse(c.game, c.maps, c.sigma, i);
      EXPECT_NEAR(dp.value, bf.best_value, 1e-9);
      // The optimal SIB strategy attains the value.
      const HistoryPolicy pol = SibHistoryPolicy(c.game, c.maps, dp.strategy);
      EXPECT_NEAR(oracle::ExpectedUtility(c.game, pol)[i], dp.value, 1e-9);
    }
  }
}

TEST(PomdpTest, SingleAgentIsAPlainPomdp) {
  Rng rng(67);
  for (int k = 0; k < 6; ++k) {
    const Case c = RandomCase(rng, 1 + k % 3, 1);
    const BeliefTree tree = BuildBeliefTree(c.game, c.maps, c.sigma);
    const PomdpResult dp = PomdpBestResponse(c.game, c.maps, c.sigma, tree, 0);
    const HistoryPolicy policy = SibHistoryPolicy(c.game, c.maps, c.sigma);
    EXPECT_NEAR(dp.value, oracle::BestResponseValue(c.game, policy, 0), 1e-9);
  }
}

TEST(PomdpTest, BobsValueIsMinusAlicesSecondStagePayoff) {
  const double c = 25;
  const FiniteGame g = MakeAliceBobGame(c);
  const CompressionMaps m = AliceBobCompression(g);
  const Alpha alpha = {0.0, 1.0};
  const SibProfile sigma = AliceBobProfile(g, m, alpha);
  const BeliefTree tree = BuildBeliefTree(g, m, sigma);
  const PomdpResult dp = PomdpBestResponse(g, m, sigma, tree, 1);
  // Alice always plays 1, so Bob pays c in period 1. In period 2 Bob plays
  // 1 after z = -1 (belief 0.2) and -1 after z = 1 (belief 0.8). Alice
  // earns 2 on (x_2, z) = (1, -1) and 1 on (-1, 1), each with probability
  // 0.5 * 0.2.
  const double alice_second = 0.5 * 0.2 * 2 + 0.5 * 0.2 * 1;
  EXPECT_NEAR(dp.value, -c - alice_second, 1e-12);
}

TEST(CertifyTest, SignalingEquilibriumIsCertified) {
  const FiniteGame g = MakeAliceBobGame(25);
  const CompressionMaps m = AliceBobCompression(g);
  const SibProfile sigma = AliceBobProfile(g, m, {0.0, 1.0});
  const Certification cert = Certify(g, m, sigma, 1e-6);
  EXPECT_TRUE(cert.certified);
  ASSERT_EQ(cert.per_agent.size(), 2u);
  EXPECT_LE(cert.per_agent[0].gain, 1e-6);
  EXPECT_LE(cert.per_agent[1].gain, 1e-9);
}

TEST(CertifyTest, FlippedThresholdIsRejected) {
  const FiniteGame g = MakeAliceBobGame(25);
  const CompressionMaps m = AliceBobCompression(g);
  const SibProfile sigma = AliceBobProfile(g, m, {0.0, 1.0}, true);
  const Certification cert = Certify(g, m, sigma, 1e-6);
  EXPECT_FALSE(cert.certified);
  EXPECT_GT(cert.max_gain, 0.1);
}

TEST(CertifyTest, ZeroUtilityGamesAreAlwaysCertified) {
  Rng rng(68);
  for (int k = 0; k < 5; ++k) {
    Case c = RandomCase(rng, 1 + k % 3);
    c.game = ZeroUtilityGame(c.game);
    const Certification cert = Certify(c.game, c.maps, c.sigma, 1e-9);
    EXPECT_TRUE(cert.certified);
    EXPECT_EQ(cert.max_gain, 0.0);
  }
}

TEST(CertifyTest, MonotoneInTolerance) {
  Rng rng(69);
  const Case c = RandomCase(rng, 2);
  const Certification tight = Certify(c.game, c.maps, c.sigma, 1e-9);
  const Certification loose =
      Certify(c.game, c.maps, c.sigma, tight.max_gain + 1e-9);
  EXPECT_TRUE(loose.certified);
  EXPECT_EQ(tight.max_gain, loose.max_gain);
}

TEST(PropertyChecksTest, HoldOnRandomGames) {
  Rng rng(70);
  for (int k = 0; k < 8; ++k) {
    Case c = RandomCase(rng, 1 + k % 3);
    BeliefTree tree;
    c.sigma = BeliefMeasurableProfile(c.game, c.maps, c.sigma, &tree);
    const HistorySpace space(c.game);
    for (int i = 0; i < 2; ++i) {
      const auto devs = SampleDeviations(space, i, 3, 8, 700 + k);
      EXPECT_LE(CheckMarkovProperty(c.game, c.maps, c.sigma, tree, i, devs),
                1e-9);
      EXPECT_LE(CheckUtilityEquivalence(c.game, c.maps, c.sigma, i, devs),
                1e-9);
      EXPECT_LE(CheckPrivateBeliefConsistency(c.game, c.maps, c.sigma, tree,
                                              i, devs),
                1e-9);
    }
  }
}

// A profile that treats two nodes with the same belief differently is not a
// function of (type, belief), and the belief state stops being Markov.
TEST(PropertyChecksTest, AliasedProfilesBreakTheMarkovProperty) {
  Rng rng(71);
  int aliased = 0;
  for (int k = 0; k < 40 && aliased < 3; ++k) {
    const Case c = RandomCase(rng, 2 + k % 2);
    const HistorySpace space(c.game);
    const auto devs = SampleDeviations(space, 0, 3, 8, 710 + k);
    const BeliefTree raw_tree = BuildBeliefTree(c.game, c.maps, c.sigma);
    if (CheckMarkovProperty(c.game, c.maps, c.sigma, raw_tree, 0, devs) <=
        1e-6) {
      continue;
    }
    ++aliased;
    BeliefTree tree;
    const SibProfile fixed =
        BeliefMeasurableProfile(c.game, c.maps, c.sigma, &tree);
    EXPECT_LE(CheckMarkovProperty(c.game, c.maps, fixed, tree, 0, devs), 1e-9);
  }
  EXPECT_GT(aliased, 0);
}

TEST(PropertyChecksTest, OnePeriodMarkovGapIsZero) {
  Rng rng(71);
  const Case c = RandomCase(rng, 1);
  const HistorySpace space(c.game);
  const BeliefTree tree = BuildBeliefTree(c.game, c.maps, c.sigma);
  const auto devs = SampleDeviations(space, 0, 3, 8, 1);
  EXPECT_EQ(CheckMarkovProperty(c.game, c.maps, c.sigma, tree, 0, devs), 0.0);
}

TEST(PropertyChecksTest, HoldOnTheSignalingGame) {
  const FiniteGame g = MakeAliceBobGame(25);
  const CompressionMaps m = AliceBobCompression(g);
  const SibProfile sigma = AliceBobProfile(g, m, {0.4, 0.7});
  const HistorySpace space(g);
  const BeliefTree tree = BuildBeliefTree(g, m, sigma);
  for (int i = 0; i < 2; ++i) {
    const auto devs = SampleDeviations(space, i, 5, 8, 3);
    EXPECT_LE(CheckMarkovProperty(g, m, sigma, tree, i, devs), 1e-9);
    EXPECT_LE(CheckUtilityEquivalence(g, m, sigma, i, devs), 1e-9);
  }
}

}  // namespace
}  // namespace sibeq
