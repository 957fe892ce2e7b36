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

#include "sibeq/solver.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <thread>

#include "sibeq/errors.h"

namespace sibeq {

const char* MethodName(SearchMethod method) {
  switch (method) {
    case SearchMethod::kIterate:
      return "iterate";
    case SearchMethod::kGrid:
      return "grid";
    case SearchMethod::kAugmented:
      return "augmented";
  }
  return "unknown";
}

SearchMethod ParseMethod(const std::string& name) {
  if (name == "iterate") return SearchMethod::kIterate;
  if (name == "grid") return SearchMethod::kGrid;
  if (name == "augmented") return SearchMethod::kAugmented;
  throw NotApplicable("unknown search method '" + name + "'");
}

const char* StatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kEquilibrium:
      return "equilibrium";
    case SolveStatus::kUncertified:
      return "candidate-uncertified";
    case SolveStatus::kNoFixedPoint:
      return "no-fixed-point";
  }
  return "unknown";
}

int ResolveWorkers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SIBEQ_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return 1;
}

Decomposition SequentialDecomposition(const FiniteGame& game,
                                      const CompressionMaps& maps,
                                      const SibProfile& sigma,
                                      const SolverOptions& options) {
  const int T = game.horizon;
  const int n = game.num_agents();
  Decomposition d;
  BeliefTreeOptions topts;
  topts.fallback = options.fallback;
  topts.cap = options.cap;
  d.tree = BuildBeliefTree(game, maps, sigma, topts);
  d.values.resize(T);
  d.target = sigma;
  d.nodes.resize(T);
  StageSolveOptions sopts = options.stage;
  sopts.eps_br = options.eps_br;
  for (int t = T - 1; t >= 0; --t) {
    const int64_t nodes = d.tree.NumNodes(t);
    d.values[t].resize(nodes);
    d.nodes[t].resize(nodes);
    for (int64_t c = 0; c < nodes; ++c) {
      ChildValues children;
      if (t + 1 < T) {
        const int nz = game.NumCommonObs(t + 1);
        children.resize(nz);
        for (int z = 0; z < nz; ++z) children[z] = d.values[t + 1][c * nz + z];
      }
      const StageGame stage(game, maps, t, d.tree.levels[t][c].belief,
                            children);
      const StageStrategy& st = sigma.stages[t][c];
      NodeReport& rep = d.nodes[t][c];
      rep.t = t;
      rep.node = c;
      rep.fallback = d.tree.levels[t][c].AnyFallback();
      rep.regret = stage.Regret(st);
      if (rep.regret <= options.eps_br) {
        rep.residual = 0;
        rep.tie = !FindTies(stage, st, options.eps_br).empty();
      } else {
        try {
          const StageSolution sol = SolveStageBne(stage, sopts);
          rep.num_equilibria = static_cast<int>(sol.equilibria.size());
          double best = std::numeric_limits<double>::infinity();
          size_t pick = 0;
          for (size_t k = 0; k < sol.equilibria.size(); ++k) {
            const double dist = StageDistance(sol.equilibria[k], st);
            if (dist < best) {
              best = dist;
              pick = k;
            }
          }
          rep.residual = best;
          rep.tie = !sol.ties[pick].empty();
          d.target.stages[t][c] = sol.equilibria[pick];
        } catch (const NoEquilibriumFound&) {
          rep.solver_failed = true;
          rep.residual = std::numeric_limits<double>::infinity();
        }
      }
      d.values[t][c] = ValueUpdate(stage, st);
      (void)n;
      d.max_residual = std::max(d.max_residual, rep.residual);
      d.max_regret = std::max(d.max_regret, rep.regret);
    }
  }
  return d;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
  Clock::time_point start = Clock::now();
  double budget = 0;
  bool Expired() const {
    if (budget <= 0) return false;
    return std::chrono::duration<double>(Clock::now() - start).count() >
           budget;
  }
  double Elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }
};

std::string Fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

struct Candidate {
  SibProfile sigma;
  Decomposition decomposition;
  int iterations = 0;
  int start = 0;
  std::vector<std::string> trace;

  bool Better(const Candidate& other) const {
    const double a = decomposition.max_residual;
    const double b = other.decomposition.max_residual;
    if (a != b) return a < b;
    return decomposition.max_regret < other.decomposition.max_regret;
  }
};

Candidate RunIteration(const FiniteGame& game, const CompressionMaps& maps,
                       SibProfile sigma, const SolverOptions& options,
                       const Deadline& deadline, int max_iter) {
  Candidate best;
  bool have = false;
  auto consider = [&](const SibProfile& s, Decomposition d, int k) {
    Candidate c;
    c.sigma = s;
    c.decomposition = std::move(d);
    c.iterations = k;
    if (!have || c.Better(best)) {
      best = std::move(c);
      have = true;
    }
  };
  for (int k = 0; k < max_iter; ++k) {
    Decomposition d = SequentialDecomposition(game, maps, sigma, options);
    const double residual = d.max_residual;
    SibProfile target = d.target;
    consider(sigma, std::move(d), k + 1);
    if (residual <= options.eps_fp || deadline.Expired()) break;
    // Full step: accept the selected stage equilibria if they are already
    // a fixed point.
    if (std::isfinite(residual)) {
      Decomposition ds = SequentialDecomposition(game, maps, target, options);
      const bool done = ds.max_residual <= options.eps_fp;
      consider(target, std::move(ds), k + 1);
      if (done) break;
    }
    for (int t = 0; t < game.horizon; ++t) {
      for (size_t c = 0; c < sigma.stages[t].size(); ++c) {
        sigma.stages[t][c] = MixStage(sigma.stages[t][c], target.stages[t][c],
                                      options.damping);
      }
    }
  }
  best.trace.push_back("iterations=" + std::to_string(best.iterations) +
                       " residual=" + Fmt(best.decomposition.max_residual));
  return best;
}

Candidate Multistart(const FiniteGame& game, const CompressionMaps& maps,
                     const SolverOptions& options, const SibProfile* guess,
                     const Deadline& deadline) {
  const int starts = std::max(1, options.seeds);
  std::vector<SibProfile> initial;
  initial.push_back(guess != nullptr ? *guess
                                     : UniformProfile(game, maps, options.cap));
  if (guess != nullptr && starts > 1) {
    initial.push_back(UniformProfile(game, maps, options.cap));
  }
  for (int k = static_cast<int>(initial.size()); k < starts; ++k) {
    Rng rng(options.seed * 1000003ULL + k);
    initial.push_back(RandomProfile(game, maps, rng, k % 2 == 0, options.cap));
  }
  std::vector<Candidate> results(initial.size());
  const int workers = std::min<int>(ResolveWorkers(options.workers),
                                    static_cast<int>(initial.size()));
  auto run = [&](int w) {
    for (size_t k = w; k < initial.size(); k += workers) {
      results[k] = RunIteration(game, maps, initial[k], options, deadline,
                                options.max_iter);
      results[k].start = static_cast<int>(k);
    }
  };
  if (workers <= 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& th : threads) th.join();
  }
  size_t best = 0;
  for (size_t k = 1; k < results.size(); ++k) {
    if (results[k].Better(results[best])) best = k;
  }
  Candidate out = std::move(results[best]);
  out.trace.insert(out.trace.begin(),
                   "multistart: " + std::to_string(initial.size()) +
                       " starts, best start " + std::to_string(best));
  return out;
}

// A free strategy row at a leading stage.
struct Slot {
  int t;
  int64_t node;
  int agent;
  int type;
  int num_actions;
  int first_param;
};

struct Parameterization {
  std::vector<Slot> slots;
  int num_params = 0;
};

Parameterization LeadingStageParameters(const FiniteGame& game,
                                        const CompressionMaps& maps,
                                        const SibProfile& base) {
  Parameterization p;
  for (int t = 0; t + 1 < game.horizon; ++t) {
    int stage_params = 0;
    for (size_t c = 0; c < base.stages[t].size(); ++c) {
      for (int i = 0; i < game.num_agents(); ++i) {
        const int na = game.NumActions(t, i);
        if (na < 2) continue;
        for (int s = 0; s < maps.NumTypes(t, i); ++s) {
          p.slots.push_back({t, static_cast<int64_t>(c), i, s, na,
                             p.num_params});
          p.num_params += na - 1;
          stage_params += na - 1;
        }
      }
    }
    if (stage_params > 2) {
      throw NotApplicable("grid search needs at most 2 strategy parameters "
                          "per stage; stage t=" +
                          std::to_string(t + 1) + " has " +
                          std::to_string(stage_params));
    }
  }
  return p;
}

// Writes theta into the leading-stage rows. Returns false if a simplex
// constraint is violated.
bool ApplyParameters(const Parameterization& p,
                     const std::vector<double>& theta, SibProfile* sigma) {
  for (const Slot& slot : p.slots) {
    auto row = sigma->stages[slot.t][slot.node].MutableRow(slot.agent,
                                                            slot.type);
    double rest = 1.0;
    for (int a = 1; a < slot.num_actions; ++a) {
      row[a] = theta[slot.first_param + a - 1];
      rest -= row[a];
    }
    if (rest < -1e-12) return false;
    row[0] = std::max(0.0, rest);
  }
  return true;
}

std::vector<double> ExtractParameters(const Parameterization& p,
                                      const SibProfile& sigma) {
  std::vector<double> theta(p.num_params);
  for (const Slot& slot : p.slots) {
    auto row = sigma.stages[slot.t][slot.node].Row(slot.agent, slot.type);
    for (int a = 1; a < slot.num_actions; ++a) {
      theta[slot.first_param + a - 1] = row[a];
    }
  }
  return theta;
}

// Completes theta with every combination (capped) of last-stage equilibria
// and returns the best resulting candidate.
Candidate EvaluateParameters(const FiniteGame& game,
                             const CompressionMaps& maps,
                             const Parameterization& p,
                             const std::vector<double>& theta,
                             const SibProfile& base,
                             const SolverOptions& options, bool* truncated) {
  Candidate best;
  best.decomposition.max_residual = std::numeric_limits<double>::infinity();
  best.decomposition.max_regret = std::numeric_limits<double>::infinity();
  SibProfile sigma = base;
  if (!ApplyParameters(p, theta, &sigma)) return best;
  const int T = game.horizon;
  BeliefTreeOptions topts;
  topts.fallback = options.fallback;
  topts.cap = options.cap;
  const BeliefTree tree = BuildBeliefTree(game, maps, sigma, topts);
  StageSolveOptions sopts = options.stage;
  sopts.eps_br = options.eps_br;
  std::vector<std::vector<StageStrategy>> choices(tree.NumNodes(T - 1));
  for (int64_t c = 0; c < tree.NumNodes(T - 1); ++c) {
    const StageGame stage(game, maps, T - 1, tree.levels[T - 1][c].belief, {});
    try {
      choices[c] = SolveStageBne(stage, sopts).equilibria;
    } catch (const NoEquilibriumFound&) {
      choices[c] = {sigma.stages[T - 1][c]};
    }
  }
  std::vector<size_t> pick(choices.size(), 0);
  for (int combo = 0;; ++combo) {
    if (combo >= options.max_selections) {
      *truncated = true;
      break;
    }
    for (size_t c = 0; c < choices.size(); ++c) {
      sigma.stages[T - 1][c] = choices[c][pick[c]];
    }
    Candidate cand;
    cand.sigma = sigma;
    cand.decomposition =
        SequentialDecomposition(game, maps, sigma, options);
    if (cand.Better(best)) best = std::move(cand);
    if (best.decomposition.max_residual <= options.eps_fp &&
        best.decomposition.max_regret <= options.eps_br) {
      break;
    }
    int k = static_cast<int>(choices.size()) - 1;
    while (k >= 0 && ++pick[k] == choices[k].size()) pick[k--] = 0;
    if (k < 0) break;
  }
  return best;
}

bool RegretOrder(const Candidate& a, const Candidate& b, double eps_fp) {
  const bool ra = a.decomposition.max_residual <= eps_fp;
  const bool rb = b.decomposition.max_residual <= eps_fp;
  if (ra != rb) return ra;
  if (a.decomposition.max_regret != b.decomposition.max_regret) {
    return a.decomposition.max_regret < b.decomposition.max_regret;
  }
  return a.decomposition.max_residual < b.decomposition.max_residual;
}

Candidate GridSearch(const FiniteGame& game, const CompressionMaps& maps,
                     const SolverOptions& options, bool refine,
                     const Deadline& deadline,
                     std::vector<std::string>* trace) {
  const SibProfile base = UniformProfile(game, maps, options.cap);
  const Parameterization p = LeadingStageParameters(game, maps, base);
  const int steps = static_cast<int>(std::llround(1.0 / options.grid_delta));
  const double points = std::pow(steps + 1.0, p.num_params);
  if (points > 1e6) {
    throw BudgetExceeded("grid has " + Fmt(points) + " points");
  }
  bool truncated = false;
  Candidate best;
  bool have = false;
  std::vector<int> idx(p.num_params, 0);
  std::vector<double> theta(p.num_params);
  int64_t evaluated = 0;
  while (true) {
    for (int k = 0; k < p.num_params; ++k) {
      theta[k] = static_cast<double>(idx[k]) / steps;
    }
    Candidate c =
        EvaluateParameters(game, maps, p, theta, base, options, &truncated);
    ++evaluated;
    if (std::isfinite(c.decomposition.max_regret) &&
        (!have || RegretOrder(c, best, options.eps_fp))) {
      best = std::move(c);
      have = true;
    }
    if (deadline.Expired()) {
      trace->push_back("grid stopped by the time budget");
      break;
    }
    int k = p.num_params - 1;
    while (k >= 0 && ++idx[k] > steps) idx[k--] = 0;
    if (k < 0) break;
  }
  trace->push_back("grid: " + std::to_string(evaluated) + " points at step " +
                   Fmt(options.grid_delta) + ", best regret " +
                   Fmt(best.decomposition.max_regret));
  if (truncated) {
    trace->push_back("last-stage selections truncated at " +
                     std::to_string(options.max_selections));
  }
  if (refine && p.num_params > 0) {
    // Pattern search around the best grid point with a shrinking step.
    double step = options.grid_delta / 2;
    std::vector<double> center = ExtractParameters(p, best.sigma);
    for (int round = 0; round < options.refine_rounds && step > 1e-13;
         ++round) {
      if (best.decomposition.max_residual <= options.eps_fp &&
          best.decomposition.max_regret <= options.eps_br) {
        break;
      }
      bool improved = false;
      for (int k = 0; k < p.num_params; ++k) {
        for (double dir : {-1.0, 1.0}) {
          std::vector<double> trial = center;
          trial[k] = std::clamp(trial[k] + dir * step, 0.0, 1.0);
          Candidate c = EvaluateParameters(game, maps, p, trial, base,
                                           options, &truncated);
          if (std::isfinite(c.decomposition.max_regret) &&
              RegretOrder(c, best, options.eps_fp)) {
            best = std::move(c);
            center = trial;
            improved = true;
          }
        }
      }
      if (!improved) step /= 2;
      if (deadline.Expired()) break;
    }
    trace->push_back("refined to regret " +
                     Fmt(best.decomposition.max_regret));
  }
  // Snap: continue with the damped iteration from the best point.
  if (best.decomposition.max_residual > options.eps_fp) {
    Candidate it = RunIteration(game, maps, best.sigma, options, deadline,
                                std::min(options.max_iter, 50));
    if (it.Better(best)) best = std::move(it);
    trace->push_back("iteration from grid optimum: residual " +
                     Fmt(best.decomposition.max_residual));
  }
  return best;
}

void AddNotes(const FiniteGame& game, const SolverOptions& options,
              SolveReport* report) {
  const Decomposition& d = report->decomposition;
  const int fallbacks = d.tree.FallbackCount();
  if (fallbacks > 0) {
    report->notes.push_back(
        "fallback beliefs used at " + std::to_string(fallbacks) +
        " (node, agent) pairs after zero-probability common observations");
  }
  // Nodes with the same beliefs but different prescriptions.
  for (int t = 0; t < game.horizon; ++t) {
    const std::vector<int> classes = BeliefClasses(d.tree.levels[t]);
    std::vector<int64_t> first(classes.size(), -1);
    for (int64_t c = 0; c < d.tree.NumNodes(t); ++c) {
      int64_t& f = first[classes[c]];
      if (f < 0) {
        f = c;
        continue;
      }
      if (StageDistance(report->sigma.stages[t][c],
                        report->sigma.stages[t][f]) > options.eps_fp) {
        report->notes.push_back(
            "belief aliasing at t=" + std::to_string(t + 1) + ": nodes " +
            std::to_string(f) + " and " + std::to_string(c) +
            " share a belief but prescribe different strategies");
      }
    }
  }
  int ties = 0;
  for (const auto& level : d.nodes) {
    for (const NodeReport& r : level) ties += r.tie ? 1 : 0;
  }
  if (ties > 0) {
    report->notes.push_back("indifference at " + std::to_string(ties) +
                            " node(s); a continuum of stage equilibria may "
                            "exist there");
  }
}

std::vector<std::vector<std::vector<double>>> LevelOneMarginals(
    const FiniteGame& game, const CompressionMaps& maps,
    const BeliefTree& tree) {
  std::vector<std::vector<std::vector<double>>> out;
  if (game.horizon < 2) return out;
  const int64_t ns = maps.TypeIndex(1).size();
  for (const BeliefNode& node : tree.levels[1]) {
    std::vector<std::vector<double>> per_agent;
    for (const auto& pi : node.belief.per_agent) {
      std::vector<double> m(game.NumStates(1), 0.0);
      for (int x = 0; x < game.NumStates(1); ++x) {
        for (int64_t s = 0; s < ns; ++s) m[x] += pi[x * ns + s];
      }
      per_agent.push_back(std::move(m));
    }
    out.push_back(std::move(per_agent));
  }
  return out;
}

}  // namespace

SolveReport EvaluateCandidate(const FiniteGame& game,
                              const CompressionMaps& maps,
                              const SibProfile& sigma,
                              const SolverOptions& options) {
  SolveReport report;
  report.sigma = sigma;
  report.decomposition = SequentialDecomposition(game, maps, sigma, options);
  if (report.decomposition.max_residual <= options.eps_fp) {
    if (options.certify) {
      BestResponseOptions bro = options.best_response;
      bro.cap = options.cap;
      bro.workers = ResolveWorkers(options.workers);
      report.certification =
          Certify(game, maps, sigma, options.eps_bne, bro);
      report.status = report.certification->certified
                          ? SolveStatus::kEquilibrium
                          : SolveStatus::kUncertified;
    } else {
      report.status = SolveStatus::kUncertified;
    }
  } else {
    report.status = SolveStatus::kNoFixedPoint;
  }
  AddNotes(game, options, &report);
  return report;
}

SolveReport FixedPointSearch(const FiniteGame& game,
                             const CompressionMaps& maps, SearchMethod method,
                             const SolverOptions& options,
                             const SibProfile* guess) {
  Deadline deadline;
  deadline.budget = options.time_budget_seconds;
  std::vector<std::string> trace;
  Candidate best;
  int starts = 1;
  switch (method) {
    case SearchMethod::kIterate:
      best = Multistart(game, maps, options, guess, deadline);
      starts = std::max(1, options.seeds);
      break;
    case SearchMethod::kGrid:
      best = GridSearch(game, maps, options, false, deadline, &trace);
      break;
    case SearchMethod::kAugmented:
      if (game.horizon != 2) {
        throw NotApplicable("the augmented method needs a two-period game");
      }
      trace.push_back(
          "agent 0 plays the Bayes image of the first-stage strategy");
      best = GridSearch(game, maps, options, true, deadline, &trace);
      break;
  }
  SolveReport report = EvaluateCandidate(game, maps, best.sigma, options);
  report.method = MethodName(method);
  report.iterations = best.iterations;
  report.starts = starts;
  report.trace = std::move(trace);
  report.trace.insert(report.trace.end(), best.trace.begin(),
                      best.trace.end());
  if (method != SearchMethod::kIterate) {
    const SibProfile base = UniformProfile(game, maps, options.cap);
    report.parameters =
        ExtractParameters(LeadingStageParameters(game, maps, base),
                          report.sigma);
  }
  report.belief_marginals =
      LevelOneMarginals(game, maps, report.decomposition.tree);
  if (deadline.Expired()) {
    report.notes.push_back("time budget exhausted");
  }
  report.elapsed_seconds = deadline.Elapsed();
  return report;
}

SolveReport SolveNoCommonObs(const FiniteGame& game,
                             const CompressionMaps& maps,
                             const SolverOptions& options) {
  for (int t = 0; t < game.horizon; ++t) {
    if (game.NumCommonObs(t) != 1) {
      throw NotApplicable("game has common observations at t=" +
                          std::to_string(t + 1));
    }
  }
  SolveReport report =
      FixedPointSearch(game, maps, SearchMethod::kIterate, options);
  report.method = "no-common-obs";
  if (report.decomposition.tree.FallbackCount() == 0) {
    report.notes.push_back(
        "single belief chain without off-path nodes; a certified profile is "
        "also a perfect Bayesian equilibrium");
  }
  return report;
}

}  // namespace sibeq
