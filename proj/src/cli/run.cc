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

#include "sibeq/cli.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sibeq/alice_bob.h"
#include "sibeq/belief.h"
#include "sibeq/errors.h"
#include "sibeq/history.h"
#include "sibeq/profile_io.h"
#include "sibeq/solver.h"
#include "sibeq/spec_io.h"
#include "sibeq/stage_game.h"
#include "sibeq/sufficiency.h"
#include "sibeq/verification.h"

namespace sibeq {

std::string ErrorName(const std::exception& e) {
#define SIBEQ_NAME(T) \
  if (dynamic_cast<const T*>(&e) != nullptr) return #T;
  SIBEQ_NAME(ParseError)
  SIBEQ_NAME(RowSumError)
  SIBEQ_NAME(EmptySetError)
  SIBEQ_NAME(ShapeMismatch)
  SIBEQ_NAME(IndexOutOfRange)
  SIBEQ_NAME(ExplosionError)
  SIBEQ_NAME(UndefinedStrategyAtHistory)
  SIBEQ_NAME(ZeroMarginalError)
  SIBEQ_NAME(NotApplicable)
  SIBEQ_NAME(MissingChildValue)
  SIBEQ_NAME(NoEquilibriumFound)
  SIBEQ_NAME(BudgetExceeded)
  SIBEQ_NAME(Error)
#undef SIBEQ_NAME
  return "error";
}

namespace {

enum class Format { kText, kTsv };

// Shared flags.
struct Config {
  uint64_t seed = 1;
  std::string format = "text";
  std::string out_path;
  int workers = 0;
  std::string spec_path;
  std::string profile_path;
  std::string profile_out;
  // Solver.
  std::string method = "iterate";
  double eps_fp = 1e-8;
  double eps_bne = 1e-6;
  double eps_br = 1e-9;
  double damping = 0.5;
  double grid_delta = 1.0 / 64;
  double time_budget = 0;
  int seeds = 4;
  int max_iter = 200;
  int64_t cap = kDefaultEnumerationCap;
  bool no_certify = false;
  // Compression checks.
  int samples = 32;
  bool companion = false;
  // Example and sweep.
  double c = 25;
  double p = 0.2;
  bool no_common_channel = false;
  double c_from = 0;
  double c_to = 50;
  double c_step = 5;
  // Stage dumps.
  int stage_t = 0;       // 1-based; 0 means every period
  int64_t stage_node = -1;

  Format fmt() const { return format == "tsv" ? Format::kTsv : Format::kText; }

  SolverOptions Solver() const {
    SolverOptions o;
    o.eps_fp = eps_fp;
    o.eps_bne = eps_bne;
    o.eps_br = eps_br;
    o.damping = damping;
    o.grid_delta = grid_delta;
    o.time_budget_seconds = time_budget;
    o.seeds = seeds;
    o.max_iter = max_iter;
    o.seed = seed;
    o.workers = workers;
    o.cap = cap;
    o.certify = !no_certify;
    o.best_response.cap = cap;
    return o;
  }
};

// Shortest text that reads back to the same double.
std::string Num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string Short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string TypeTupleLabel(const CompressionMaps& maps, int t, int64_t s) {
  const std::vector<int> d = maps.TypeIndex(t).Decode(s);
  std::string out;
  for (size_t i = 0; i < d.size(); ++i) {
    if (i > 0) out += ";";
    out += maps.sets[t][i][d[i]];
  }
  return out;
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
}

// Subcommand bodies write their report into `report` and return the exit
// code.

int DoValidate(const Config& cfg, std::ostream& report) {
  const GameSpec spec = LoadSpec(cfg.spec_path);
  const FiniteGame& g = spec.game;
  const HistorySpace space(g);
  if (cfg.fmt() == Format::kTsv) {
    report << "t\tagent\tstates\tactions\tprivate_obs\tcommon_obs\ttypes\t"
              "private_histories\tcommon_histories\n";
    for (int t = 0; t < g.horizon; ++t) {
      for (int i = 0; i < g.num_agents(); ++i) {
        report << t + 1 << "\t" << g.agents[i] << "\t" << g.NumStates(t)
               << "\t" << g.NumActions(t, i) << "\t" << g.NumPrivateObs(t, i)
               << "\t" << g.NumCommonObs(t) << "\t"
               << spec.maps.NumTypes(t, i) << "\t"
               << Num(space.NumPrivate(t, i)) << "\t"
               << Num(space.NumCommon(t)) << "\n";
      }
    }
    return kExitOk;
  }
  report << "valid game: horizon " << g.horizon << ", " << g.num_agents()
         << " agents\n";
  for (int t = 0; t < g.horizon; ++t) {
    report << "t=" << t + 1 << ": |X|=" << g.NumStates(t)
           << " |Z|=" << g.NumCommonObs(t) << " common histories "
           << Num(space.NumCommon(t)) << "\n";
    for (int i = 0; i < g.num_agents(); ++i) {
      report << "  " << g.agents[i] << ": |A|=" << g.NumActions(t, i)
             << " |Y|=" << g.NumPrivateObs(t, i)
             << " |S|=" << spec.maps.NumTypes(t, i) << " private histories "
             << Num(space.NumPrivate(t, i)) << "\n";
    }
  }
  report << "compression: "
         << (spec.explicit_compression ? "explicit" : "identity") << "\n";
  return kExitOk;
}

int DoVerifyCompression(const Config& cfg, std::ostream& report) {
  const GameSpec spec = LoadSpec(cfg.spec_path);
  SufficiencyOptions opts;
  opts.samples = cfg.samples;
  opts.seed = cfg.seed;
  opts.cap = cfg.cap;
  SufficiencyReport r = VerifySufficiency(spec.game, spec.maps, opts);
  if (cfg.companion) {
    r.Merge(VerifyCompanionConditionII(spec.game, spec.maps, opts));
  }
  auto agent_name = [&](int i) {
    return i < 0 ? std::string("joint") : spec.game.agents[i];
  };
  if (cfg.fmt() == Format::kTsv) {
    report << "# total_zeta\t" << VerdictName(r.total_zeta) << "\n"
           << "# update_consistency\t" << VerdictName(r.update_consistency)
           << "\n"
           << "# belief_sufficiency\t" << VerdictName(r.belief_sufficiency)
           << "\n";
    if (cfg.companion) {
      report << "# companion_ii\t" << VerdictName(r.companion_ii) << "\n";
    }
    report << "condition\tt\tagent\ttuple\tgap\tlhs\trhs\tprofile\n";
    for (const Violation& v : r.violations) {
      report << v.condition << "\t" << v.t + 1 << "\t" << agent_name(v.agent)
             << "\t" << v.tuple << "\t" << Num(v.gap) << "\t" << v.lhs << "\t"
             << v.rhs << "\t" << v.profile << "\n";
    }
  } else {
    report << "condition (i)   zeta total:          "
           << VerdictName(r.total_zeta) << "\n"
           << "condition (ii)  update consistency:  "
           << VerdictName(r.update_consistency) << "\n"
           << "condition (iii) belief sufficiency:  "
           << VerdictName(r.belief_sufficiency) << " ("
           << r.profiles_sampled
           << " SIB profiles: uniform plus random, seed " << r.seed << ")\n";
    if (cfg.companion) {
      report << "companion condition (ii):            "
             << VerdictName(r.companion_ii) << "\n";
    }
    report << "max violation: " << Short(r.max_violation) << "\n";
    for (const Violation& v : r.violations) {
      report << "  [" << v.condition << "] t=" << v.t + 1 << " "
             << agent_name(v.agent) << " " << v.tuple
             << " gap=" << Short(v.gap);
      if (!v.lhs.empty()) report << " lhs=" << v.lhs << " rhs=" << v.rhs;
      if (v.profile >= 0) report << " profile=" << v.profile;
      report << "\n";
    }
  }
  const bool companion_ok = !cfg.companion || r.companion_ii != Verdict::kFail;
  return r.Passed() && companion_ok ? kExitOk : kExitNegative;
}

SibProfile LoadProfileOrUniform(const Config& cfg, const GameSpec& spec) {
  if (cfg.profile_path.empty()) return UniformProfile(spec.game, spec.maps);
  return ParseProfileFile(spec.game, spec.maps, cfg.profile_path);
}

void WriteBeliefRows(const FiniteGame& g, const CompressionMaps& maps,
                     const BeliefTree& tree, std::ostream& report) {
  const HistorySpace space(g);
  report << "t\tcommon_history\tagent\tx\ts\tprob\tfallback\n";
  for (int t = 0; t < g.horizon; ++t) {
    const int64_t ns = maps.TypeIndex(t).size();
    for (int64_t c = 0; c < tree.NumNodes(t); ++c) {
      const BeliefNode& node = tree.levels[t][c];
      for (int i = 0; i < g.num_agents(); ++i) {
        const auto& pi = node.belief.per_agent[i];
        for (int x = 0; x < g.NumStates(t); ++x) {
          for (int64_t s = 0; s < ns; ++s) {
            report << t + 1 << "\t" << space.CommonLabel(t, c) << "\t"
                   << g.agents[i] << "\t" << g.states[t][x] << "\t"
                   << TypeTupleLabel(maps, t, s) << "\t"
                   << Num(pi[x * ns + s]) << "\t"
                   << (node.fallback[i] ? 1 : 0) << "\n";
          }
        }
      }
    }
  }
}

int DoBeliefs(const Config& cfg, std::ostream& report) {
  const GameSpec spec = LoadSpec(cfg.spec_path);
  const SibProfile sigma = LoadProfileOrUniform(cfg, spec);
  BeliefTreeOptions opts;
  opts.cap = cfg.cap;
  const BeliefTree tree = BuildBeliefTree(spec.game, spec.maps, sigma, opts);
  WriteBeliefRows(spec.game, spec.maps, tree, report);
  return kExitOk;
}

void WriteCertification(const FiniteGame& g, const Certification& cert,
                        Format fmt, std::ostream& report) {
  if (fmt == Format::kTsv) {
    report << "agent\tbest_value\tequilibrium_value\tgain\tmode\t"
              "strategies_examined\n";
    for (const DeviationResult& d : cert.per_agent) {
      report << g.agents[d.agent] << "\t" << Num(d.best_value) << "\t"
             << Num(d.equilibrium_value) << "\t" << Num(d.gain) << "\t"
             << (d.mode_used == BestResponseMode::kEnumerate ? "enumerate"
                                                             : "backward")
             << "\t" << Num(d.strategies_examined) << "\n";
    }
    return;
  }
  report << "certification: "
         << (cert.certified ? "certified SIB-BNE" : "NOT certified")
         << ", max deviation gain " << Short(cert.max_gain) << " (eps_bne "
         << Short(cert.eps) << ")\n";
  for (const DeviationResult& d : cert.per_agent) {
    report << "  " << g.agents[d.agent] << ": best "
           << Short(d.best_value) << ", candidate "
           << Short(d.equilibrium_value) << ", gain " << Short(d.gain) << " ("
           << (d.mode_used == BestResponseMode::kEnumerate
                   ? "enumerated " + Num(d.strategies_examined) +
                         " pure strategies"
                   : std::string("backward induction over histories"))
           << ")\n";
  }
}

// The best deviation of the agent with the largest gain, one row per
// history where it is defined.
void WriteWorstDeviation(const FiniteGame& g, const Certification& cert,
                         std::ostream& report) {
  if (cert.per_agent.empty()) return;
  const DeviationResult* worst = &cert.per_agent[0];
  for (const auto& d : cert.per_agent) {
    if (d.gain > worst->gain) worst = &d;
  }
  const HistorySpace space(g);
  const int i = worst->agent;
  report << "\ndeviation_agent\tt\tprivate_history\tcommon_history\taction\n";
  for (int t = 0; t < g.horizon; ++t) {
    const int64_t np = space.PrivateCount(t, i);
    const int64_t nc = space.CommonCount(t);
    for (int64_t p = 0; p < np; ++p) {
      for (int64_t c = 0; c < nc; ++c) {
        if (!worst->argmax.Defined(t, i, p, c)) continue;
        const auto row = worst->argmax.Get(t, i, p, c);
        const int a = static_cast<int>(
            std::max_element(row.begin(), row.end()) - row.begin());
        report << g.agents[i] << "\t" << t + 1 << "\t"
               << space.PrivateLabel(t, i, p) << "\t"
               << space.CommonLabel(t, c) << "\t" << g.actions[t][i][a]
               << "\n";
      }
    }
  }
}

void WriteSolveReport(const FiniteGame& g, const SolveReport& r,
                      const SolverOptions& opts, Format fmt,
                      std::ostream& report) {
  const HistorySpace space(g);
  const Decomposition& d = r.decomposition;
  if (fmt == Format::kTsv) {
    report << "# method\t" << r.method << "\n"
           << "# status\t" << StatusName(r.status) << "\n"
           << "# residual\t" << Num(r.residual()) << "\n"
           << "# max_regret\t" << Num(d.max_regret) << "\n";
    if (r.certification) {
      report << "# max_gain\t" << Num(r.certification->max_gain) << "\n";
    }
    report << "t\tnode\tcommon_history\tresidual\tregret\tnum_equilibria\t"
              "tie\tfallback\tsolver_failed\n";
    for (const auto& level : d.nodes) {
      for (const NodeReport& n : level) {
        report << n.t + 1 << "\t" << n.node << "\t"
               << space.CommonLabel(n.t, n.node) << "\t" << Num(n.residual)
               << "\t" << Num(n.regret) << "\t" << n.num_equilibria << "\t"
               << n.tie << "\t" << n.fallback << "\t" << n.solver_failed
               << "\n";
      }
    }
    return;
  }
  report << "method: " << r.method << "\n"
         << "status: " << StatusName(r.status) << "\n"
         << "fixed-point residual: " << Short(r.residual()) << " (eps_fp "
         << Short(opts.eps_fp) << ")\n"
         << "max stage regret: " << Short(d.max_regret) << "\n";
  if (r.iterations > 0) {
    report << "iterations: " << r.iterations << " (best of " << r.starts
           << " starts)\n";
  }
  if (!r.parameters.empty()) {
    report << "leading-stage parameters:";
    for (double v : r.parameters) report << " " << Short(v);
    report << "\n";
  }
  if (r.certification) {
    WriteCertification(g, *r.certification, fmt, report);
  } else {
    report << "certification: not run\n";
  }
  report << "residual by node:\n";
  for (const auto& level : d.nodes) {
    for (const NodeReport& n : level) {
      report << "  t=" << n.t + 1 << " [" << space.CommonLabel(n.t, n.node)
             << "] residual " << Short(n.residual) << ", regret "
             << Short(n.regret);
      if (n.tie) report << ", tie";
      if (n.fallback) report << ", fallback belief";
      if (n.solver_failed) report << ", stage solver failed";
      report << "\n";
    }
  }
  for (const auto& line : r.trace) report << "trace: " << line << "\n";
  for (const auto& line : r.notes) report << "note: " << line << "\n";
}

int StatusExit(const SolveReport& r) {
  return r.status == SolveStatus::kEquilibrium ? kExitOk : kExitNegative;
}

int DoSolve(const Config& cfg, std::ostream& report) {
  const GameSpec spec = LoadSpec(cfg.spec_path);
  const SolverOptions opts = cfg.Solver();
  std::optional<SibProfile> guess;
  if (!cfg.profile_path.empty()) {
    guess = ParseProfileFile(spec.game, spec.maps, cfg.profile_path);
  }
  const SolveReport r =
      FixedPointSearch(spec.game, spec.maps, ParseMethod(cfg.method), opts,
                       guess ? &*guess : nullptr);
  WriteSolveReport(spec.game, r, opts, cfg.fmt(), report);
  if (!cfg.profile_out.empty()) {
    WriteFile(cfg.profile_out, SerializeProfile(spec.game, spec.maps, r.sigma));
  }
  return StatusExit(r);
}

int DoCertify(const Config& cfg, std::ostream& report) {
  const GameSpec spec = LoadSpec(cfg.spec_path);
  if (cfg.profile_path.empty()) throw Error("certify needs --profile");
  const SibProfile sigma =
      ParseProfileFile(spec.game, spec.maps, cfg.profile_path);
  BestResponseOptions bro;
  bro.cap = cfg.cap;
  bro.workers = ResolveWorkers(cfg.workers);
  const Certification cert =
      Certify(spec.game, spec.maps, sigma, cfg.eps_bne, bro);
  if (cfg.fmt() == Format::kTsv) {
    report << "# certified\t" << (cert.certified ? 1 : 0) << "\n"
           << "# max_gain\t" << Num(cert.max_gain) << "\n";
  }
  WriteCertification(spec.game, cert, cfg.fmt(), report);
  WriteWorstDeviation(spec.game, cert, report);
  return cert.certified ? kExitOk : kExitNegative;
}

struct AliceBobRow {
  double c = 0;
  SolveReport report;
  Alpha alpha{};
  QBelief q{};
  double fp_residual = 0;
};

AliceBobRow SolveAliceBob(const Config& cfg, double c) {
  const FiniteGame g = MakeAliceBobGame(c, cfg.p, !cfg.no_common_channel);
  const CompressionMaps m = AliceBobCompression(g);
  AliceBobRow row;
  row.c = c;
  row.report = FixedPointSearch(g, m, ParseMethod(cfg.method), cfg.Solver());
  row.alpha = ExtractAlpha(row.report.sigma);
  row.q = ExtractQ(g, m, row.report.sigma);
  row.fp_residual = cfg.no_common_channel
                        ? row.report.residual()
                        : FixedPointResidual(row.alpha, c, cfg.p);
  return row;
}

constexpr char kAliceBobHeader[] =
    "c\tp\tmethod\tstatus\tresidual\talpha1\talpha2\tq_minus\tq_plus\t"
    "fp_residual\tmax_gain\n";

void WriteAliceBobRow(const Config& cfg, const AliceBobRow& r,
                      std::ostream& report) {
  const double gain = r.report.certification
                          ? r.report.certification->max_gain
                          : std::numeric_limits<double>::quiet_NaN();
  report << Num(r.c) << "\t" << Num(cfg.p) << "\t" << r.report.method << "\t"
         << StatusName(r.report.status) << "\t" << Num(r.report.residual())
         << "\t" << Num(r.alpha[0]) << "\t" << Num(r.alpha[1]) << "\t"
         << Num(r.q[0]) << "\t" << Num(r.q[1]) << "\t" << Num(r.fp_residual)
         << "\t" << Num(gain) << "\n";
}

int DoExampleAliceBob(Config cfg, bool method_set, std::ostream& report) {
  if (!method_set) cfg.method = "augmented";
  const AliceBobRow r = SolveAliceBob(cfg, cfg.c);
  if (!cfg.profile_out.empty()) {
    const FiniteGame g = MakeAliceBobGame(cfg.c, cfg.p, !cfg.no_common_channel);
    WriteFile(cfg.profile_out,
              SerializeProfile(g, AliceBobCompression(g), r.report.sigma));
  }
  if (cfg.fmt() == Format::kTsv) {
    report << kAliceBobHeader;
    WriteAliceBobRow(cfg, r, report);
    return StatusExit(r.report);
  }
  report << "Alice-Bob signaling game, c = " << Short(cfg.c)
         << ", p = " << Short(cfg.p)
         << (cfg.no_common_channel ? ", no common observation" : "") << "\n"
         << "alpha = (P(a=-1 | x=-1), P(a=1 | x=1)) = (" << Short(r.alpha[0])
         << ", " << Short(r.alpha[1]) << ")\n"
         << "Bob's belief P(x2=1 | z): z=-1 -> " << Short(r.q[0])
         << ", z=1 -> " << Short(r.q[1]) << "\n"
         << "Bob plays 1 iff that belief is at most 1/3\n";
  if (!cfg.no_common_channel) {
    report << "first-stage fixed-point gap (closed form): "
           << Short(r.fp_residual) << "\n";
  }
  const FiniteGame g = MakeAliceBobGame(cfg.c, cfg.p, !cfg.no_common_channel);
  WriteSolveReport(g, r.report, cfg.Solver(), Format::kText, report);
  return StatusExit(r.report);
}

int DoSweep(Config cfg, bool method_set, std::ostream& report) {
  if (!method_set) cfg.method = "augmented";
  if (cfg.c_step <= 0) throw Error("--c-step must be positive");
  report << kAliceBobHeader;
  const int steps =
      static_cast<int>(std::floor((cfg.c_to - cfg.c_from) / cfg.c_step + 1e-9));
  for (int k = 0; k <= steps; ++k) {
    const double c = cfg.c_from + k * cfg.c_step;
    WriteAliceBobRow(cfg, SolveAliceBob(cfg, c), report);
  }
  return kExitOk;
}

int DoStageDump(const Config& cfg, std::ostream& report) {
  const GameSpec spec = LoadSpec(cfg.spec_path);
  const SibProfile sigma = LoadProfileOrUniform(cfg, spec);
  SolverOptions opts = cfg.Solver();
  const Decomposition d =
      SequentialDecomposition(spec.game, spec.maps, sigma, opts);
  const HistorySpace space(spec.game);
  for (int t = 0; t < spec.game.horizon; ++t) {
    if (cfg.stage_t > 0 && cfg.stage_t != t + 1) continue;
    for (int64_t c = 0; c < d.tree.NumNodes(t); ++c) {
      if (cfg.stage_node >= 0 && cfg.stage_node != c) continue;
      ChildValues children;
      if (t + 1 < spec.game.horizon) {
        const int nz = spec.game.NumCommonObs(t + 1);
        for (int z = 0; z < nz; ++z) {
          children.push_back(d.values[t + 1][c * nz + z]);
        }
      }
      const StageGame stage(spec.game, spec.maps, t,
                            d.tree.levels[t][c].belief, children);
      report << "== t=" << t + 1 << " node " << c << " ["
             << space.CommonLabel(t, c) << "] regret "
             << Short(d.nodes[t][c].regret) << "\n"
             << stage.Describe(spec.game, spec.maps);
    }
  }
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Config cfg;
  CLI::App app{"Equilibria of finite dynamic games with asymmetric "
               "information"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--seed", cfg.seed, "Seed for every randomized procedure");
  app.add_option("--format", cfg.format, "Report format")
      ->check(CLI::IsMember({"text", "tsv"}));
  app.add_option("--out", cfg.out_path, "Write the report to this file");
  app.add_option("--workers", cfg.workers,
                 "Worker threads (0: SIBEQ_WORKERS or 1)");
  app.add_option("--cap", cfg.cap, "Enumeration cap");

  auto spec_opt = [&](CLI::App* sub) {
    sub->add_option("--spec", cfg.spec_path, "Game file")->required();
  };
  auto solver_opts = [&](CLI::App* sub) {
    sub->add_option("--method", cfg.method, "iterate, grid or augmented")
        ->check(CLI::IsMember({"iterate", "grid", "augmented"}));
    sub->add_option("--eps-fp", cfg.eps_fp, "Fixed-point tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--eps-bne", cfg.eps_bne, "Certification tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--eps-br", cfg.eps_br, "Stage best-response tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--damping", cfg.damping, "Iteration step")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--grid-delta", cfg.grid_delta, "Grid resolution")
        ->check(CLI::Range(1e-6, 1.0));
    sub->add_option("--seeds", cfg.seeds, "Multistart count")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", cfg.max_iter, "Iteration cap per start")
        ->check(CLI::PositiveNumber);
    sub->add_option("--time-budget", cfg.time_budget, "Seconds, 0 = none");
    sub->add_flag("--no-certify", cfg.no_certify, "Skip certification");
    sub->add_option("--profile-out", cfg.profile_out,
                    "Write the profile found to this file");
  };

  CLI::App* validate = app.add_subcommand("validate", "Check a game file");
  spec_opt(validate);

  CLI::App* verify = app.add_subcommand(
      "verify-compression", "Check the sufficiency conditions");
  spec_opt(verify);
  verify->add_option("--samples", cfg.samples,
                     "Random SIB profiles for condition (iii)");
  verify->add_flag("--companion", cfg.companion,
                   "Also check the joint-update companion condition");

  CLI::App* beliefs =
      app.add_subcommand("beliefs", "Dump the belief tree under a profile");
  spec_opt(beliefs);
  beliefs->add_option("--profile", cfg.profile_path,
                      "Profile (default uniform)");

  CLI::App* solve = app.add_subcommand("solve", "Search for an equilibrium");
  spec_opt(solve);
  solver_opts(solve);
  solve->add_option("--profile", cfg.profile_path, "Initial guess");

  CLI::App* certify =
      app.add_subcommand("certify", "Brute-force check of a profile");
  spec_opt(certify);
  certify->add_option("--profile", cfg.profile_path, "Profile")->required();
  certify->add_option("--eps-bne", cfg.eps_bne, "Tolerance")
      ->check(CLI::PositiveNumber);

  CLI::App* example = app.add_subcommand("example", "Bundled examples");
  example->require_subcommand(1);
  CLI::App* alice_bob =
      example->add_subcommand("alice-bob", "Two-period signaling game");
  alice_bob->add_option("--c", cfg.c, "Alice's payoff for action 1");
  alice_bob->add_option("--p", cfg.p, "Observation noise")
      ->check(CLI::Range(0.0, 1.0));
  alice_bob->add_flag("--no-common-channel", cfg.no_common_channel,
                      "Remove the common observation");
  solver_opts(alice_bob);
  // The signaling example has an exact method of its own.
  alice_bob->get_option("--method")->default_str("augmented");

  CLI::App* sweep = app.add_subcommand("sweep", "Alice-Bob residual over c");
  sweep->add_option("--c-from", cfg.c_from, "First value of c");
  sweep->add_option("--c-to", cfg.c_to, "Last value of c");
  sweep->add_option("--c-step", cfg.c_step, "Step in c");
  sweep->add_option("--p", cfg.p, "Observation noise")
      ->check(CLI::Range(0.0, 1.0));
  sweep->add_flag("--no-common-channel", cfg.no_common_channel,
                  "Remove the common observation");
  solver_opts(sweep);
  // The signaling example has an exact method of its own.
  sweep->get_option("--method")->default_str("augmented");

  CLI::App* stage = app.add_subcommand("stage-dump", "Print stage games");
  spec_opt(stage);
  stage->add_option("--profile", cfg.profile_path, "Profile (default uniform)");
  stage->add_option("--t", cfg.stage_t, "Period (1-based, 0 = all)");
  stage->add_option("--node", cfg.stage_node, "Node index (-1 = all)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  std::ostringstream report;
  int code = kExitOk;
  try {
    if (validate->parsed()) {
      code = DoValidate(cfg, report);
    } else if (verify->parsed()) {
      code = DoVerifyCompression(cfg, report);
    } else if (beliefs->parsed()) {
      code = DoBeliefs(cfg, report);
    } else if (solve->parsed()) {
      code = DoSolve(cfg, report);
    } else if (certify->parsed()) {
      code = DoCertify(cfg, report);
    } else if (alice_bob->parsed()) {
      code = DoExampleAliceBob(cfg, alice_bob->count("--method") > 0, report);
    } else if (sweep->parsed()) {
      code = DoSweep(cfg, sweep->count("--method") > 0, report);
    } else if (stage->parsed()) {
      code = DoStageDump(cfg, report);
    }
  } catch (const std::exception& e) {
    err << "error: " << ErrorName(e) << ": " << e.what() << "\n";
    return kExitError;
  }
  if (cfg.out_path.empty()) {
    out << report.str();
  } else {
    try {
      WriteFile(cfg.out_path, report.str());
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitError;
    }
  }
  return code;
}

}  // namespace sibeq
