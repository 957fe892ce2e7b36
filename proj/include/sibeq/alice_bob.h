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

#ifndef SIBEQ_ALICE_BOB_H_
#define SIBEQ_ALICE_BOB_H_

#include <array>
#include <string>
#include <vector>

#include "sibeq/compression.h"
#include "sibeq/game.h"
#include "sibeq/profile.h"

namespace sibeq {

// Two-period signaling game. Alice sees x_1 in {-1, 1} and plays
// a in {-1, 1} (a = 1 pays c); x_2 = x_1 a. Both see z = x_1 w with
// P(w = 1) = 1 - p. Bob guesses x_2 at t = 2; Alice earns 2 on (x_2, b) =
// (1, 1), 1 on (-1, -1) and Bob earns the negative.
//
// Agent 0 is Alice and agent 1 is Bob. Labels are "-1" and "1"; inactive
// slots use the single label "none". Without the common channel z is
// replaced by a singleton.
FiniteGame MakeAliceBobGame(double c, double p = 0.2,
                            bool with_common_channel = true);

// S_1^A = x_1, S_2^A = x_2 via phi_2(s, y, z, a) = s a; Bob keeps nothing.
CompressionMaps AliceBobCompression(const FiniteGame& game);

// Alice's first-stage strategy: alpha_1 = P(a = -1 | x = -1),
// alpha_2 = P(a = 1 | x = 1).
using Alpha = std::array<double, 2>;
// Bob's belief P(x_2 = 1 | z) for z = -1 and z = 1.
using QBelief = std::array<double, 2>;

// Bayes image of alpha.
QBelief BayesQ(const Alpha& alpha, double p = 0.2);

// Bob's stage best response: plays 1 iff q <= 1/3.
inline double BobThreshold(double q) { return q <= 1.0 / 3.0 ? 1.0 : 0.0; }

// Alice's interim stage payoffs when Bob follows BobThreshold.
double RMinus(double alpha1, const QBelief& q, double c, double p = 0.2);
double RPlus(double alpha2, const QBelief& q, double c, double p = 0.2);
// Ex ante payoff 0.5 RMinus + 0.5 RPlus, written with explicit Bob weights
// beta = (beta(q_-1), beta(q_1)) so that indifferent Bob mixtures can be
// evaluated.
double AliceAugmentedPayoff(const Alpha& alpha, const std::array<double, 2>& beta,
                            double c, double p = 0.2);
// Agent 0 payoff: minus the squared distance of q from the Bayes image.
double AgentZeroPayoff(const Alpha& alpha, const QBelief& q, double p = 0.2);

// Largest interim gain Alice could obtain by deviating when the belief is
// the Bayes image of alpha. Zero iff alpha satisfies both fixed-point
// conditions.
double FixedPointResidual(const Alpha& alpha, double c, double p = 0.2);

struct AugmentedSolution {
  Alpha alpha{};
  QBelief q{};
  double residual = 0;  // FixedPointResidual at alpha
};

// Grid over the unit square at step 1/resolution followed by pattern-search
// refinement; returns the point with the smallest residual.
AugmentedSolution AugmentedStageSolve(double c, double p = 0.2,
                                      int resolution = 64);

// Profile from alpha with Bob following the threshold rule (or its
// negation when flip_bob is set).
SibProfile AliceBobProfile(const FiniteGame& game, const CompressionMaps& maps,
                           const Alpha& alpha, bool flip_bob = false);

// Reads alpha back from a profile.
Alpha ExtractAlpha(const SibProfile& profile);
// Bob's CIB belief P(x_2 = 1) at the two t = 2 nodes.
QBelief ExtractQ(const FiniteGame& game, const CompressionMaps& maps,
                 const SibProfile& profile);

struct SecureCaseResult {
  std::string name;
  int points = 0;
  int passed = 0;
  double min_gain = 0;   // exact securing gain minus the securing margin
  double min_bound = 0;  // analytic lower bound on the gain
  double min_slice = 0;  // 1 + alpha_1 - alpha_2 on the slice (cases iii-v)
  bool ok() const { return points > 0 && passed == points; }
};

// Checks, on a grid of non-equilibrium points for each of the five cases,
// that the securing deviation gains a positive margin uniformly over the
// neighborhood's possible Bob responses.
std::vector<SecureCaseResult> BetterReplySecureCheck(double c,
                                                     int points_per_case = 50,
                                                     double p = 0.2);

}  // namespace sibeq

#endif  // SIBEQ_ALICE_BOB_H_
