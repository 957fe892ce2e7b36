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
#include "sibeq/errors.h"
#include "sibeq/game.h"
#include "sibeq/random_games.h"

namespace sibeq {
namespace {

TEST(JointIndexTest, EncodeDecodeRoundTrip) {
  const JointIndex idx({3, 1, 4});
  EXPECT_EQ(idx.size(), 12);
  for (int64_t k = 0; k < idx.size(); ++k) {
    const std::vector<int> d = idx.Decode(k);
    EXPECT_EQ(idx.Encode(d), k);
    for (int c = 0; c < 3; ++c) EXPECT_EQ(idx.Component(k, c), d[c]);
  }
  // Component 0 is the most significant digit.
  const int digits[] = {2, 0, 1};
  EXPECT_EQ(idx.Encode(digits), 2 * 4 + 1);
}

TEST(ValidateGameTest, AcceptsSignalingGame) {
  const FiniteGame g = MakeAliceBobGame(25);
  EXPECT_EQ(g.horizon, 2);
  EXPECT_EQ(g.NumJointActions(0), 2);
  EXPECT_EQ(g.NumJointObs(1), 2);
}

TEST(ValidateGameTest, RejectsBrokenRow) {
  FiniteGame g = MakeAliceBobGame(25);
  g.transition[0](0, 0) = 0.9;
  g.transition[0](0, 1) = 0.0;
  EXPECT_THROW(ValidateGame(g), RowSumError);
}

TEST(ValidateGameTest, RejectsNegativeEntry) {
  FiniteGame g = MakeAliceBobGame(25);
  g.initial = {1.5, -0.5};
  EXPECT_THROW(ValidateGame(g), RowSumError);
}

TEST(ValidateGameTest, RenormalizesWithinUserTolerance) {
  FiniteGame g = MakeAliceBobGame(25);
  g.initial = {0.5 + 4e-10, 0.5};
  const FiniteGame v = ValidateGame(g);
  EXPECT_NEAR(v.initial[0] + v.initial[1], 1.0, kInternalTolerance);
}

TEST(ValidateGameTest, IsIdempotent) {
  Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    const FiniteGame g = RandomGame(rng);
    EXPECT_EQ(ValidateGame(g), g);
  }
}

TEST(ValidateGameTest, RejectsEmptySet) {
  FiniteGame g = MakeAliceBobGame(25);
  g.common_obs[1].clear();
  EXPECT_THROW(ValidateGame(g), EmptySetError);
}

TEST(ValidateGameTest, RejectsWrongUtilityShape) {
  FiniteGame g = MakeAliceBobGame(25);
  g.utility[1][0].pop_back();
  EXPECT_THROW(ValidateGame(g), ShapeMismatch);
}

TEST(ValidateGameTest, RejectsDuplicateLabels) {
  FiniteGame g = MakeAliceBobGame(25);
  g.states[0] = {"1", "1"};
  EXPECT_THROW(ValidateGame(g), Error);
}

// P(x', o' | x, a) against a plain triple loop over the kernels.
TEST(JointStepKernelTest, MatchesTripleLoop) {
  Rng rng(11);
  for (int k = 0; k < 15; ++k) {
    RandomGameOptions opts;
    opts.horizon = 2 + k % 2;
    const FiniteGame g = RandomGame(rng, opts);
    for (int t = 0; t + 1 < g.horizon; ++t) {
      const int na = oracle::JointActions(g, t);
      const int no = g.observation[t + 1].cols();
      for (int x = 0; x < g.NumStates(t); ++x) {
        for (int a = 0; a < na; ++a) {
          const std::vector<double> got = JointStepKernel(g, t, x, a);
          ASSERT_EQ(static_cast<int>(got.size()), g.NumStates(t + 1) * no);
          double total = 0;
          for (int x2 = 0; x2 < g.NumStates(t + 1); ++x2) {
            for (int o = 0; o < no; ++o) {
              const double want = g.transition[t](x * na + a, x2) *
                                  g.observation[t + 1](x2 * na + a, o);
              EXPECT_NEAR(got[x2 * no + o], want, 1e-15);
              total += got[x2 * no + o];
            }
          }
          EXPECT_NEAR(total, 1.0, 1e-12);
        }
      }
    }
  }
}

TEST(ProductObservationKernelTest, MultipliesIndependentParts) {
  Rng rng(5);
  const FiniteGame g = RandomGame(rng);
  const int t = 1;
  const int rows = g.NumStates(t) * g.NumJointActions(t - 1);
  std::vector<Kernel> parts;
  for (int i = 0; i < g.num_agents(); ++i) {
    Kernel k(rows, g.NumPrivateObs(t, i));
    for (int r = 0; r < rows; ++r) {
      for (int y = 0; y < k.cols(); ++y) k(r, y) = 1.0 / k.cols();
    }
    parts.push_back(k);
  }
  Kernel common(rows, g.NumCommonObs(t));
  for (int r = 0; r < rows; ++r) {
    for (int z = 0; z < common.cols(); ++z) {
      common(r, z) = z == r % common.cols() ? 1.0 : 0.0;
    }
  }
  const Kernel joint = ProductObservationKernel(g, t, parts, common);
  for (int r = 0; r < rows; ++r) {
    for (int o = 0; o < joint.cols(); ++o) {
      const std::vector<int> d = oracle::ObsDigits(g, t, o);
      double want = common(r, d[0]);
      for (int i = 0; i < g.num_agents(); ++i) want *= parts[i](r, d[i + 1]);
      EXPECT_NEAR(joint(r, o), want, 1e-15);
    }
  }
}

}  // namespace
}  // namespace sibeq
