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

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "sibeq/alice_bob.h"
#include "sibeq/compression.h"
#include "sibeq/errors.h"
#include "sibeq/history.h"
#include "sibeq/profile.h"
#include "sibeq/random_games.h"
#include "sibeq/spec_io.h"
#include "sibeq/sufficiency.h"
#include "sibeq/verification.h"

namespace sibeq {
namespace {

bool Ok(Verdict v) { return v == Verdict::kPass || v == Verdict::kSampledPass; }

// Every agent forgets everything.
CompressionMaps NullCompression(const FiniteGame& g) {
  CompressionMaps m;
  m.sets.assign(g.horizon, std::vector<LabelSet>(g.num_agents(), {"none"}));
  m.phi.resize(g.horizon);
  for (int t = 0; t < g.horizon; ++t) {
    for (int i = 0; i < g.num_agents(); ++i) {
      m.phi[t].push_back(std::vector<int>(PhiDomainSize(g, m, t, i), 0));
    }
  }
  DeriveZetaFromPhi(g, &m);
  return m;
}

TEST(IdentityCompressionTest, TypesAreHistories) {
  Rng rng(31);
  RandomGameOptions opts;
  opts.horizon = 3;
  const FiniteGame g = RandomGame(rng, opts);
  const CompressionMaps m = IdentityCompression(g);
  const HistorySpace space(g);
  for (int t = 0; t < g.horizon; ++t) {
    const int64_t nc = space.CommonCount(t);
    for (int i = 0; i < g.num_agents(); ++i) {
      EXPECT_EQ(m.NumTypes(t, i), space.PrivateCount(t, i));
      for (int64_t p = 0; p < space.PrivateCount(t, i); ++p) {
        for (int64_t c = 0; c < nc; ++c) EXPECT_EQ(m.Zeta(t, i, p, c, nc), p);
      }
    }
  }
  EXPECT_NO_THROW(ValidateCompression(g, m));
}

TEST(IdentityCompressionTest, PassesAllConditions) {
  Rng rng(32);
  for (int k = 0; k < 6; ++k) {
    RandomGameOptions opts;
    opts.horizon = 1 + k % 3;
    const FiniteGame g = RandomGame(rng, opts);
    const SufficiencyReport r = VerifySufficiency(g, IdentityCompression(g));
    EXPECT_TRUE(r.Passed());
    EXPECT_EQ(r.total_zeta, Verdict::kPass);
    EXPECT_EQ(r.update_consistency, Verdict::kPass);
    EXPECT_TRUE(Ok(r.belief_sufficiency));
    EXPECT_LE(r.max_violation, 1e-9);
  }
}

TEST(ZetaTest, ComposesPhiAlongHistories) {
  const FiniteGame g = MakeAliceBobGame(25);
  const CompressionMaps m = AliceBobCompression(g);
  const HistorySpace space(g);
  // At t = 2 Alice's type is x_2 = y_1 * a_1, whatever z is.
  const int64_t nc = space.CommonCount(1);
  for (int64_t p = 0; p < space.PrivateCount(1, 0); ++p) {
    std::vector<int> ys;
    std::vector<int> as;
    space.DecodePrivate(1, 0, p, &ys, &as);
    const int x1 = ys[0] == 0 ? -1 : 1;
    const int a = as[0] == 0 ? -1 : 1;
    for (int64_t c = 0; c < nc; ++c) {
      EXPECT_EQ(m.Zeta(1, 0, p, c, nc), x1 * a == 1 ? 1 : 0);
    }
  }
}

TEST(SufficiencyTest, SignalingCompressionPasses) {
  const FiniteGame g = MakeAliceBobGame(25);
  const SufficiencyReport r = VerifySufficiency(g, AliceBobCompression(g));
  EXPECT_TRUE(r.Passed());
  EXPECT_TRUE(r.violations.empty());
}

TEST(SufficiencyTest, ForgettingThePrivateSignalFails) {
  const FiniteGame g = MakeAliceBobGame(25);
  const SufficiencyReport r = VerifySufficiency(g, NullCompression(g));
  EXPECT_EQ(r.total_zeta, Verdict::kPass);
  EXPECT_EQ(r.update_consistency, Verdict::kPass);
  EXPECT_EQ(r.belief_sufficiency, Verdict::kFail);
  EXPECT_FALSE(r.Passed());
  // At the first stage Alice knows x_1 exactly but the compression says it
  // is a fair coin. Later stages depend on the sampled profiles.
  bool first_stage = false;
  for (const Violation& v : r.violations) {
    if (v.t != 0) continue;
    first_stage = true;
    EXPECT_EQ(v.agent, 0);
    EXPECT_NEAR(v.gap, 0.5, 1e-12);
  }
  EXPECT_TRUE(first_stage);
  EXPECT_GE(r.max_violation, 0.5);
}

// Changing one phi entry after zeta was derived breaks recursive
// updatability at exactly one tuple.
TEST(SufficiencyTest, CorruptedPhiListsExactlyOneTuple) {
  const FiniteGame g = MakeAliceBobGame(25);
  CompressionMaps m = AliceBobCompression(g);
  m.phi[1][0][0] = 1 - m.phi[1][0][0];
  const SufficiencyReport r = VerifyUpdateConsistency(g, m);
  EXPECT_EQ(r.update_consistency, Verdict::kFail);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].condition, "ii");
  EXPECT_EQ(r.violations[0].t, 1);
  EXPECT_EQ(r.violations[0].agent, 0);
  EXPECT_FALSE(r.violations[0].tuple.empty());
}

TEST(SufficiencyTest, ZetaOutsideTypesFailsConditionOne) {
  const FiniteGame g = MakeAliceBobGame(25);
  CompressionMaps m = AliceBobCompression(g);
  m.zeta[1][0][0] = 7;
  const SufficiencyReport r = VerifyZetaTotal(g, m);
  EXPECT_EQ(r.total_zeta, Verdict::kFail);
  EXPECT_THROW(ValidateCompression(g, m), Error);
}

TEST(SufficiencyTest, ReportsAreReproducible) {
  Rng rng(33);
  const FiniteGame g = RandomGame(rng);
  const CompressionMaps m = NullCompression(g);
  SufficiencyOptions opts;
  opts.seed = 5;
  const SufficiencyReport a = VerifyBeliefSufficiency(g, m, opts);
  const SufficiencyReport b = VerifyBeliefSufficiency(g, m, opts);
  EXPECT_EQ(a.max_violation, b.max_violation);
  EXPECT_EQ(a.violations.size(), b.violations.size());
}

TEST(SufficiencyTest, XorSeparatesTheTwoConditions) {
  const GameSpec spec =
      LoadSpec(std::string(SIBEQ_DATA_DIR) + "/xor.game");
  const SufficiencyReport belief = VerifyBeliefSufficiency(spec.game, spec.maps);
  EXPECT_TRUE(Ok(belief.belief_sufficiency));
  const SufficiencyReport comp =
      VerifyCompanionConditionII(spec.game, spec.maps);
  EXPECT_EQ(comp.companion_ii, Verdict::kFail);
  ASSERT_FALSE(comp.violations.empty());
  EXPECT_EQ(comp.violations[0].condition, "companion-ii");
  EXPECT_NEAR(comp.max_violation, 0.5, 1e-12);
}

// With the identity compression the belief on others' histories does not
// depend on the agent's own strategy.
TEST(PolicyIndependenceTest, HoldsForIdentityCompression) {
  Rng rng(34);
  for (int k = 0; k < 5; ++k) {
    RandomGameOptions opts;
    opts.horizon = 2 + k % 2;
    const FiniteGame g = RandomGame(rng, opts);
    const CompressionMaps m = IdentityCompression(g);
    const SibProfile sigma = RandomProfile(g, m, rng);
    const HistorySpace space(g);
    const HistoryPolicy others = SibHistoryPolicy(g, m, sigma);
    for (int i = 0; i < g.num_agents(); ++i) {
      const auto devs = SampleDeviations(space, i, 4, 8, 100 + k);
      EXPECT_LE(PolicyIndependenceCheck(g, m, others, i, devs), 1e-9);
    }
  }
}

}  // namespace
}  // namespace sibeq
