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
#include <limits>
#include <map>
#include <vector>

#include "gtest/gtest.h"
#include "oracle.h"
#include "sibeq/compression.h"
#include "sibeq/errors.h"
#include "sibeq/history.h"
#include "sibeq/profile.h"
#include "sibeq/random_games.h"

namespace sibeq {
namespace {

// Number of private histories by listing every sequence explicitly.
int64_t CountPrivateByListing(const FiniteGame& g, int t, int i) {
  std::vector<std::vector<int>> seqs;
  for (int y = 0; y < g.NumPrivateObs(0, i); ++y) seqs.push_back({y});
  for (int k = 1; k <= t; ++k) {
    std::vector<std::vector<int>> next;
    for (const auto& s : seqs) {
      for (int a = 0; a < g.NumActions(k - 1, i); ++a) {
        for (int y = 0; y < g.NumPrivateObs(k, i); ++y) {
          auto s2 = s;
          s2.push_back(a);
          s2.push_back(y);
          next.push_back(std::move(s2));
        }
      }
    }
    seqs = std::move(next);
  }
  return static_cast<int64_t>(seqs.size());
}

TEST(HistorySpaceTest, CountsMatchListing) {
  Rng rng(21);
  for (int k = 0; k < 10; ++k) {
    RandomGameOptions opts;
    opts.horizon = 1 + k % 3;
    const FiniteGame g = RandomGame(rng, opts);
    const HistorySpace space(g);
    for (int t = 0; t < g.horizon; ++t) {
      int64_t common = 1;
      for (int s = 0; s <= t; ++s) common *= g.NumCommonObs(s);
      EXPECT_EQ(space.CommonCount(t), common);
      int64_t joint = common;
      for (int i = 0; i < g.num_agents(); ++i) {
        EXPECT_EQ(space.PrivateCount(t, i), CountPrivateByListing(g, t, i));
        joint *= space.PrivateCount(t, i);
      }
      EXPECT_EQ(static_cast<int64_t>(EnumerateHistories(space, t).size()),
                joint);
    }
  }
}

TEST(HistorySpaceTest, ExtendAndDecodeAgree) {
  Rng rng(22);
  RandomGameOptions opts;
  opts.horizon = 3;
  const FiniteGame g = RandomGame(rng, opts);
  const HistorySpace space(g);
  for (int i = 0; i < g.num_agents(); ++i) {
    for (int64_t p = 0; p < space.PrivateCount(1, i); ++p) {
      for (int a = 0; a < g.NumActions(1, i); ++a) {
        for (int y = 0; y < g.NumPrivateObs(2, i); ++y) {
          const int64_t q = space.ExtendPrivate(1, i, p, a, y);
          EXPECT_EQ(space.PrivatePrefix(2, i, q), p);
          EXPECT_EQ(space.LastAction(2, i, q), a);
          EXPECT_EQ(space.LastPrivateObs(2, i, q), y);
          std::vector<int> ys;
          std::vector<int> as;
          space.DecodePrivate(2, i, q, &ys, &as);
          ASSERT_EQ(ys.size(), 3u);
          ASSERT_EQ(as.size(), 2u);
          EXPECT_EQ(as[1], a);
          EXPECT_EQ(ys[2], y);
        }
      }
    }
  }
  for (int64_t c = 0; c < space.CommonCount(2); ++c) {
    EXPECT_EQ(space.EncodeCommon(space.DecodeCommon(2, c)), c);
  }
}

TEST(HistorySpaceTest, CapRaisesExplosionError) {
  Rng rng(23);
  RandomGameOptions opts;
  opts.horizon = 3;
  opts.max_size_long_horizon = 3;
  const FiniteGame g = RandomGame(rng, opts);
  const HistorySpace space(g);
  EXPECT_THROW(EnumerateHistories(space, 2, /*cap=*/1), ExplosionError);
}

// The forward measure against the reference enumeration, cell by cell.
TEST(ForwardWorldsTest, MatchesReferenceMeasure) {
  Rng rng(24);
  for (int k = 0; k < 10; ++k) {
    RandomGameOptions opts;
    opts.horizon = 1 + k % 3;
    const FiniteGame g = RandomGame(rng, opts);
    const CompressionMaps m = IdentityCompression(g);
    const SibProfile sigma = RandomProfile(g, m, rng);
    const HistorySpace space(g);
    const HistoryPolicy policy = SibHistoryPolicy(g, m, sigma);
    const auto worlds = ForwardWorlds(g, space, policy);
    const auto layers = oracle::Layers(g, policy);
    for (int t = 0; t < g.horizon; ++t) {
      const WorldLayer& w = worlds[t];
      double total = 0;
      std::map<oracle::Key, double> got;
      for (int64_t e = 0; e < static_cast<int64_t>(w.mass.size()); ++e) {
        total += w.mass[e];
        if (w.mass[e] == 0) continue;
        oracle::Key key = {w.State(e), w.Common(e)};
        for (int i = 0; i < g.num_agents(); ++i) key.push_back(w.Private(e, i));
        got[key] += w.mass[e];
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
      for (const auto& [key, mass] : layers[t]) {
        EXPECT_NEAR(got[key], mass, 1e-12);
      }
      EXPECT_EQ(got.size(), layers[t].size());
    }
  }
}

TEST(ExpectedTotalUtilityTest, MatchesReference) {
  Rng rng(25);
  for (int k = 0; k < 10; ++k) {
    RandomGameOptions opts;
    opts.horizon = 1 + k % 3;
    const FiniteGame g = RandomGame(rng, opts);
    const CompressionMaps m = IdentityCompression(g);
    const SibProfile sigma = RandomProfile(g, m, rng);
    const HistorySpace space(g);
    const HistoryPolicy policy = SibHistoryPolicy(g, m, sigma);
    const auto got = ExpectedTotalUtility(g, space, policy);
    const auto want = oracle::ExpectedUtility(g, policy);
    for (int i = 0; i < g.num_agents(); ++i) {
      EXPECT_NEAR(got[i], want[i], 1e-12);
    }
  }
}

// Sample means of simulated total utility lie within three standard errors
// of the exact expectation.
TEST(SimulateTest, MonteCarloWithinThreeSigma) {
  Rng rng(26);
  RandomGameOptions opts;
  opts.horizon = 3;
  const FiniteGame g = RandomGame(rng, opts);
  const CompressionMaps m = IdentityCompression(g);
  const SibProfile sigma = RandomProfile(g, m, rng);
  const HistoryPolicy policy = SibHistoryPolicy(g, m, sigma);
  const auto exact = oracle::ExpectedUtility(g, policy);
  const int n = 20000;
  Rng sim(27);
  std::vector<double> sum(g.num_agents(), 0.0);
  std::vector<double> sum2(g.num_agents(), 0.0);
  for (int s = 0; s < n; ++s) {
    const Trajectory tr = Simulate(g, policy, sim);
    ASSERT_EQ(static_cast<int>(tr.states.size()), g.horizon);
    for (int i = 0; i < g.num_agents(); ++i) {
      sum[i] += tr.total_utility[i];
      sum2[i] += tr.total_utility[i] * tr.total_utility[i];
    }
  }
  for (int i = 0; i < g.num_agents(); ++i) {
    const double mean = sum[i] / n;
    const double var = sum2[i] / n - mean * mean;
    const double se = std::sqrt(std::max(var, 1e-18) / n);
    EXPECT_LE(std::abs(mean - exact[i]), 3 * se + 1e-12)
        << "agent " << i << " mean " << mean << " exact " << exact[i];
  }
}

TEST(SimulateTest, SeedsAreReproducible) {
  Rng rng(28);
  const FiniteGame g = RandomGame(rng);
  const CompressionMaps m = IdentityCompression(g);
  const SibProfile sigma = RandomProfile(g, m, rng);
  const HistoryPolicy policy = SibHistoryPolicy(g, m, sigma);
  const Trajectory a = Simulate(g, policy, 99);
  const Trajectory b = Simulate(g, policy, 99);
  EXPECT_EQ(a.states, b.states);
  EXPECT_EQ(a.actions, b.actions);
}

TEST(SimulateTest, UndefinedStrategyRaises) {
  Rng rng(29);
  const FiniteGame g = RandomGame(rng);
  const HistoryPolicy broken = [](int, int, int64_t, int64_t,
                                  std::span<double> probs) {
    std::fill(probs.begin(), probs.end(),
              std::numeric_limits<double>::quiet_NaN());
  };
  EXPECT_THROW(Simulate(g, broken, 1), UndefinedStrategyAtHistory);
}

}  // namespace
}  // namespace sibeq
