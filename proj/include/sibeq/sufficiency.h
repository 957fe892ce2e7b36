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

#ifndef SIBEQ_SUFFICIENCY_H_
#define SIBEQ_SUFFICIENCY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sibeq/compression.h"
#include "sibeq/game.h"
#include "sibeq/history.h"

namespace sibeq {

enum class Verdict { kNotChecked, kPass, kSampledPass, kFail };

const char* VerdictName(Verdict v);

struct Violation {
  std::string condition;  // "i", "ii", "iii" or "companion-ii"
  int t = 0;              // 0-based
  int agent = -1;         // -1 when the condition is joint
  std::string tuple;
  double gap = 0;
  std::string lhs;  // conditional PMFs, rendered
  std::string rhs;
  int profile = -1;  // sampled profile index, -1 if not applicable
};

struct SufficiencyReport {
  Verdict total_zeta = Verdict::kNotChecked;        // condition (i)
  Verdict update_consistency = Verdict::kNotChecked;  // condition (ii)
  Verdict belief_sufficiency = Verdict::kNotChecked;  // condition (iii)
  Verdict companion_ii = Verdict::kNotChecked;
  std::vector<Violation> violations;
  double max_violation = 0;
  int profiles_sampled = 0;
  uint64_t seed = 0;

  void Merge(const SufficiencyReport& other);
  bool Passed() const;
};

struct SufficiencyOptions {
  int samples = 32;
  uint64_t seed = 1;
  double tolerance = 1e-9;
  int64_t cap = kDefaultEnumerationCap;
  // Violations listed per condition; the maximum is always exact.
  int max_listed = 64;
};

// zeta is total and maps into S_t^i.
SufficiencyReport VerifyZetaTotal(const FiniteGame& game,
                                  const CompressionMaps& maps);

// zeta_t(h_t) = phi_t(zeta_{t-1}(h_{t-1}), y_t, z_t, a_{t-1}) on every
// history. Each violated phi entry is listed once.
SufficiencyReport VerifyUpdateConsistency(
    const FiniteGame& game, const CompressionMaps& maps,
    const SufficiencyOptions& options = {});

// P(x_t, s_t^-i | s_t^i, c_t) = P(x_t, s_t^-i | p_t^i, c_t) under the
// uniform profile and options.samples random profiles of SIB form.
SufficiencyReport VerifyBeliefSufficiency(
    const FiniteGame& game, const CompressionMaps& maps,
    const SufficiencyOptions& options = {});

// P(s_{t+1}, z_{t+1} | p_t, c_t, a_t) = P(s_{t+1}, z_{t+1} | s_t, c_t, a_t)
// with joint private histories, types and actions.
SufficiencyReport VerifyCompanionConditionII(
    const FiniteGame& game, const CompressionMaps& maps,
    const SufficiencyOptions& options = {});

// All three conditions.
SufficiencyReport VerifySufficiency(const FiniteGame& game,
                                    const CompressionMaps& maps,
                                    const SufficiencyOptions& options = {});

// Worst gap between P(x_t, s_t^-i | h_t^i) under each deviation of `agent`
// and P(x_t, s_t^-i | s_t^i, c_t) under the uniform strategy of `agent`,
// others following `others`.
double PolicyIndependenceCheck(
    const FiniteGame& game, const CompressionMaps& maps,
    const HistoryPolicy& others, int agent,
    const std::vector<TabularHistoryPolicy>& deviations,
    int64_t cap = kDefaultEnumerationCap);

}  // namespace sibeq

#endif  // SIBEQ_SUFFICIENCY_H_
