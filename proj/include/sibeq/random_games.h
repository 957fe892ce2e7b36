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

#ifndef SIBEQ_RANDOM_GAMES_H_
#define SIBEQ_RANDOM_GAMES_H_

#include <cstdint>

#include "sibeq/game.h"
#include "sibeq/rng.h"

namespace sibeq {

struct RandomGameOptions {
  int agents = 2;
  int horizon = 2;
  // Upper bounds on set sizes; sizes are drawn uniformly from 1..max.
  int max_states = 3;
  int max_actions = 3;
  int max_private_obs = 3;
  int max_common_obs = 3;
  // Tighter bound applied to every set when horizon >= 3, which keeps
  // exhaustive oracles at desk scale.
  int max_size_long_horizon = 2;
  bool common_observations = true;
  // Probability that a kernel entry is forced to zero (rows keep at least
  // one positive entry). Zeros create unreachable histories.
  double sparsity = 0.2;
};

// Random game with kernels drawn from a flat Dirichlet and utilities
// uniform on [-1, 1].
FiniteGame RandomGame(Rng& rng, const RandomGameOptions& options = {});

// Same game with every utility set to zero.
FiniteGame ZeroUtilityGame(FiniteGame game);

}  // namespace sibeq

#endif  // SIBEQ_RANDOM_GAMES_H_
