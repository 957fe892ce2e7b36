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

#ifndef SIBEQ_SOLVER_H_
#define SIBEQ_SOLVER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sibeq/belief.h"
#include "sibeq/compression.h"
#include "sibeq/game.h"
#include "sibeq/profile.h"
#include "sibeq/stage_game.h"
#include "sibeq/verification.h"

namespace sibeq {

enum class SearchMethod { kIterate, kGrid, kAugmented };

const char* MethodName(SearchMethod method);
// Accepts "iterate", "grid" and "augmented"; throws NotApplicable otherwise.
SearchMethod ParseMethod(const std::string& name);

struct SolverOptions {
  double eps_fp = 1e-8;
  double eps_br = 1e-9;
  double eps_bne = 1e-6;
  double damping = 0.5;
  int max_iter = 200;
  int seeds = 4;
  uint64_t seed = 1;
  double grid_delta = 1.0 / 64;
  int refine_rounds = 60;
  int max_selections = 256;
  // 0 reads SIBEQ_WORKERS from the environment, defaulting to 1.
  int workers = 0;
  bool certify = true;
  double time_budget_seconds = 0;  // 0 means unlimited
  int64_t cap = kDefaultEnumerationCap;
  StageSolveOptions stage;
  BestResponseOptions best_response;
  FallbackRule fallback = nullptr;
};

// Worker count from options or SIBEQ_WORKERS.
int ResolveWorkers(int requested);

// values[t][node][i][s^i].
using ValueFunction =
    std::vector<std::vector<std::vector<std::vector<double>>>>;

struct NodeReport {
  int t = 0;
  int64_t node = 0;
  double residual = 0;  // distance from sigma_t to the nearest stage BNE
  double regret = 0;    // largest type regret of sigma_t in its stage game
  int num_equilibria = 0;  // stage BNE examined (0 if sigma_t itself is one)
  bool tie = false;
  bool fallback = false;
  bool solver_failed = false;
};

struct Decomposition {
  BeliefTree tree;
  ValueFunction values;
  SibProfile target;  // the selected stage BNE at every node
  std::vector<std::vector<NodeReport>> nodes;
  double max_residual = 0;
  double max_regret = 0;
};

// One backward pass: beliefs under sigma, stage games with continuation
// values under sigma, and at every node the fixed-point residual, i.e. the
// distance from sigma to the closest stage equilibrium.
Decomposition SequentialDecomposition(const FiniteGame& game,
                                      const CompressionMaps& maps,
                                      const SibProfile& sigma,
                                      const SolverOptions& options = {});

enum class SolveStatus {
  kEquilibrium,   // residual within eps_fp and certified
  kUncertified,   // residual within eps_fp, certification failed or skipped
  kNoFixedPoint,  // residual above eps_fp
};

const char* StatusName(SolveStatus status);

struct SolveReport {
  SolveStatus status = SolveStatus::kNoFixedPoint;
  std::string method;
  SibProfile sigma;
  Decomposition decomposition;
  std::optional<Certification> certification;
  int iterations = 0;
  int starts = 0;
  // Parameters of the leading stages (grid and augmented methods).
  std::vector<double> parameters;
  // Node beliefs at t = 1 as state marginals: [node][i][x].
  std::vector<std::vector<std::vector<double>>> belief_marginals;
  std::vector<std::string> trace;
  std::vector<std::string> notes;
  double elapsed_seconds = 0;

  double residual() const { return decomposition.max_residual; }
};

// Searches for a profile with zero fixed-point residual. `guess` seeds the
// first start of the iterate method.
SolveReport FixedPointSearch(const FiniteGame& game,
                             const CompressionMaps& maps, SearchMethod method,
                             const SolverOptions& options = {},
                             const SibProfile* guess = nullptr);

// Finalizes a candidate: decomposition, optional certification and status.
SolveReport EvaluateCandidate(const FiniteGame& game,
                              const CompressionMaps& maps,
                              const SibProfile& sigma,
                              const SolverOptions& options);

// Games without common observations: one belief node per period.
SolveReport SolveNoCommonObs(const FiniteGame& game,
                             const CompressionMaps& maps,
                             const SolverOptions& options = {});

}  // namespace sibeq

#endif  // SIBEQ_SOLVER_H_
