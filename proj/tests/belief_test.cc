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
#include <map>
#include <vector>

#include "gtest/gtest.h"
#include "oracle.h"
#include "sibeq/alice_bob.h"
#include "sibeq/belief.h"
#include "sibeq/compression.h"
#include "sibeq/errors.h"
#include "sibeq/profile.h"
#include "sibeq/random_games.h"

namespace sibeq {
namespace {

// Reference node belief of agent i: P(x_t, s_t | c_t) with i playing
// uniformly and the others following sigma.
std::map<int64_t, std::vector<double>> ReferenceNodeBeliefs(
    const FiniteGame& g, const CompressionMaps& m, const SibProfile& sigma,
    int t, int i) {
  const HistoryPolicy policy =
      oracle::UniformFor(i, SibHistoryPolicy(g, m, sigma));
  const auto layers = oracle::Layers(g, policy, -1, t);
  const HistorySpace space(g);
  const int64_t nc = space.CommonCount(t);
  const int64_t ns = m.TypeIndex(t).size();
  std::map<int64_t, std::vector<double>> out;
  for (const auto& [k, w] : layers[t]) {
    auto& v = out[oracle::KeyCommon(k)];
    v.resize(g.NumStates(t) * ns, 0.0);
    int64_t s = 0;
    for (int j = 0; j < g.num_agents(); ++j) {
      s = s * m.NumTypes(t, j) +
          m.Zeta(t, j, oracle::KeyPrivate(k, j), oracle::KeyCommon(k), nc);
    }
    v[oracle::KeyState(k) * ns + s] += w;
  }
  for (auto& [c, v] : out) {
    double total = 0;
    for (double x : v) total += x;
    for (double& x : v) x /= total;
  }
  return out;
}

TEST(BeliefTreeTest, MatchesReferencePosteriors) {
  Rng rng(41);
  for (int k = 0; k < 12; ++k) {
    RandomGameOptions opts;
    opts.horizon = 1 + k % 3;
    const FiniteGame g = RandomGame(rng, opts);
    const CompressionMaps m = IdentityCompression(g);
    const SibProfile sigma = RandomProfile(g, m, rng, k % 2 == 0);
    const BeliefTree tree = BuildBeliefTree(g, m, sigma);
    for (int t = 0; t < g.horizon; ++t) {
      for (int i = 0; i < g.num_agents(); ++i) {
        for (const auto& [c, want] : ReferenceNodeBeliefs(g, m, sigma, t, i)) {
          const BeliefNode& node = tree.levels[t][c];
          EXPECT_FALSE(node.fallback[i]);
          const auto& got = node.belief.per_agent[i];
          ASSERT_EQ(got.size(), want.size());
          for (size_t e = 0; e < want.size(); ++e) {
            EXPECT_NEAR(got[e], want[e], 1e-12);
          }
        }
      }
    }
  }
}

TEST(BeliefTreeTest, InitialMeasureIsADistribution) {
  Rng rng(42);
  const FiniteGame g = RandomGame(rng);
  const CompressionMaps m = IdentityCompression(g);
  double total = 0;
  for (double v : InitialF(g, m)) total += v;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(BeliefTreeTest, UpdateBeliefAgreesWithTree) {
  const FiniteGame g = MakeAliceBobGame(25);
  const CompressionMaps m = AliceBobCompression(g);
  const SibProfile sigma = AliceBobProfile(g, m, {0.3, 0.9});
  const BeliefTree tree = BuildBeliefTree(g, m, sigma);
  for (int z = 0; z < 2; ++z) {
    const BeliefNode node =
        UpdateBelief(g, m, 0, tree.levels[0][0].belief, sigma.stages[0][0], z,
                     z);
    for (int i = 0; i < 2; ++i) {
      EXPECT_EQ(node.belief.per_agent[i],
                tree.levels[1][z].belief.per_agent[i]);
    }
  }
}

TEST(BeliefTreeTest, RebuildFromALevelReproducesTheTree) {
  Rng rng(43);
  RandomGameOptions opts;
  opts.horizon = 3;
  const FiniteGame g = RandomGame(rng, opts);
  const CompressionMaps m = IdentityCompression(g);
  const SibProfile a = RandomProfile(g, m, rng);
  const SibProfile b = RandomProfile(g, m, rng);
  BeliefTree tree = BuildBeliefTree(g, m, a);
  const BeliefTree want = BuildBeliefTree(g, m, b);
  // Level 0 does not depend on the profile.
  RebuildBeliefTreeFrom(g, m, b, 0, &tree);
  for (int t = 0; t < g.horizon; ++t) {
    for (int64_t c = 0; c < want.NumNodes(t); ++c) {
      EXPECT_EQ(tree.levels[t][c].belief.per_agent,
                want.levels[t][c].belief.per_agent);
    }
  }
}

// A signaling game whose common channel always reports z = 1.
FiniteGame DeafChannelGame() {
  FiniteGame g = MakeAliceBobGame(25);
  Kernel& k = g.observation[1];
  for (int r = 0; r < k.rows(); ++r) {
    k(r, 0) = 0.0;
    k(r, 1) = 1.0;
  }
  return ValidateGame(g);
}

TEST(FallbackTest, InfeasibleObservationUsesUniformBelief) {
  const FiniteGame g = DeafChannelGame();
  const CompressionMaps m = AliceBobCompression(g);
  const BeliefTree tree = BuildBeliefTree(g, m, UniformProfile(g, m));
  const BeliefNode& dead = tree.levels[1][0];
  EXPECT_TRUE(dead.fallback[0]);
  EXPECT_TRUE(dead.fallback[1]);
  for (double v : dead.belief.per_agent[1]) EXPECT_DOUBLE_EQ(v, 0.25);
  EXPECT_FALSE(tree.levels[1][1].AnyFallback());
  EXPECT_EQ(tree.FallbackCount(), 2);
}

TEST(FallbackTest, CustomRuleIsUsed) {
  const FiniteGame g = DeafChannelGame();
  const CompressionMaps m = AliceBobCompression(g);
  BeliefTreeOptions opts;
  opts.fallback = [](int, int, int64_t) {
    return std::vector<double>{1, 0, 0, 0};
  };
  const BeliefTree tree = BuildBeliefTree(g, m, UniformProfile(g, m), opts);
  EXPECT_EQ(tree.levels[1][0].belief.per_agent[1],
            (std::vector<double>{1, 0, 0, 0}));
}

TEST(PrivateBeliefTest, ZeroMassTypeRaises) {
  const FiniteGame g = MakeAliceBobGame(25);
  const CompressionMaps m = AliceBobCompression(g);
  // Bob is sure that x_2 = -1, so Alice type "1" has no mass.
  const std::vector<double> pi = {1, 0, 0, 0};
  EXPECT_THROW(PrivateBelief(g, m, 1, 0, pi, 1), ZeroMarginalError);
  const auto b = PrivateBelief(g, m, 1, 0, pi, 0);
  EXPECT_DOUBLE_EQ(b[0], 1.0);
  const auto marg = TypeMarginal(g, m, 1, 0, pi);
  EXPECT_DOUBLE_EQ(marg[0], 1.0);
  EXPECT_DOUBLE_EQ(marg[1], 0.0);
}

TEST(NoCommonObsChainTest, RejectsCommonObservations) {
  const FiniteGame g = MakeAliceBobGame(25);
  const CompressionMaps m = AliceBobCompression(g);
  EXPECT_THROW(NoCommonObsChain(g, m, UniformProfile(g, m)), NotApplicable);
}

TEST(NoCommonObsChainTest, MatchesTreeWithoutCommonChannel) {
  const FiniteGame g = MakeAliceBobGame(25, 0.2, false);
  const CompressionMaps m = AliceBobCompression(g);
  const SibProfile sigma = AliceBobProfile(g, m, {0.25, 0.75});
  const auto chain = NoCommonObsChain(g, m, sigma);
  const BeliefTree tree = BuildBeliefTree(g, m, sigma);
  ASSERT_EQ(chain.size(), 2u);
  for (int t = 0; t < 2; ++t) {
    for (int i = 0; i < 2; ++i) {
      const auto& a = chain[t].belief.per_agent[i];
      const auto& b = tree.levels[t][0].belief.per_agent[i];
      for (size_t e = 0; e < a.size(); ++e) EXPECT_NEAR(a[e], b[e], 1e-15);
    }
    EXPECT_FALSE(chain[t].AnyFallback());
  }
}

TEST(BeliefMeasurableProfileTest, NodesSharingABeliefAgree) {
  Rng rng(47);
  for (int k = 0; k < 10; ++k) {
    RandomGameOptions opts;
    opts.horizon = 2 + k % 2;
    const FiniteGame g = RandomGame(rng, opts);
    const CompressionMaps m = IdentityCompression(g);
    BeliefTree tree;
    const SibProfile sigma =
        BeliefMeasurableProfile(g, m, RandomProfile(g, m, rng), &tree);
    const BeliefTree rebuilt = BuildBeliefTree(g, m, sigma);
    for (int t = 0; t < g.horizon; ++t) {
      ASSERT_EQ(tree.NumNodes(t), rebuilt.NumNodes(t));
      const std::vector<int> classes = BeliefClasses(tree.levels[t]);
      for (int64_t c = 0; c < tree.NumNodes(t); ++c) {
        for (int i = 0; i < g.num_agents(); ++i) {
          EXPECT_EQ(tree.levels[t][c].belief.per_agent[i],
                    rebuilt.levels[t][c].belief.per_agent[i]);
        }
        for (int64_t d = 0; d < c; ++d) {
          if (classes[c] == classes[d]) {
            EXPECT_EQ(StageDistance(sigma.stages[t][c], sigma.stages[t][d]),
                      0.0);
          }
        }
      }
    }
  }
}

TEST(BeliefMeasurableProfileTest, LeavesDistinctBeliefsAlone) {
  const FiniteGame g = MakeAliceBobGame(25);
  const CompressionMaps m = AliceBobCompression(g);
  const SibProfile sigma = AliceBobProfile(g, m, {0.4, 0.7});
  EXPECT_EQ(BeliefMeasurableProfile(g, m, sigma), sigma);
}

}  // namespace
}  // namespace sibeq
