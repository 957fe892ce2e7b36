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

#include "sibeq/stage_game.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "sibeq/errors.h"
#include "sibeq/rng.h"

namespace sibeq {

StageGame::StageGame(const FiniteGame& game, const CompressionMaps& maps,
                     int t, const CibBelief& belief,
                     const ChildValues& children)
    : t_(t), num_states_(game.NumStates(t)), actions_(game.ActionIndex(t)) {
  const int n = game.num_agents();
  const bool last = t + 1 >= game.horizon;
  if (!last) {
    if (static_cast<int>(children.size()) != game.NumCommonObs(t + 1)) {
      throw MissingChildValue("stage game at t=" + std::to_string(t + 1) +
                              " needs one value set per child");
    }
    for (const auto& child : children) {
      if (static_cast<int>(child.size()) != n) {
        throw MissingChildValue("child values need one entry per agent");
      }
      for (int i = 0; i < n; ++i) {
        if (static_cast<int>(child[i].size()) != maps.NumTypes(t + 1, i)) {
          throw MissingChildValue("child values of " + game.agents[i] +
                                  " have the wrong size");
        }
      }
    }
  }
  num_types_.resize(n);
  for (int i = 0; i < n; ++i) num_types_[i] = maps.NumTypes(t, i);

  // Interim beliefs.
  beliefs_.resize(n);
  type_mass_.resize(n);
  other_types_.resize(n);
  other_digits_.resize(n);
  for (int i = 0; i < n; ++i) {
    other_types_[i] = maps.OtherTypeIndex(t, i);
    const int64_t no = other_types_[i].size();
    other_digits_[i].assign(no * n, -1);
    std::vector<int> od(other_types_[i].num_components());
    for (int64_t o = 0; o < no; ++o) {
      other_types_[i].Decode(o, od);
      for (int j = 0, k = 0; j < n; ++j) {
        if (j != i) other_digits_[i][o * n + j] = od[k++];
      }
    }
    type_mass_[i] = TypeMarginal(game, maps, t, i, belief.per_agent[i]);
    beliefs_[i].resize(num_types_[i]);
    for (int s = 0; s < num_types_[i]; ++s) {
      if (type_mass_[i][s] > kFeasibilityThreshold) {
        beliefs_[i][s] =
            PrivateBelief(game, maps, t, i, belief.per_agent[i], s);
      } else {
        beliefs_[i][s].assign(num_states_ * no,
                              1.0 / static_cast<double>(num_states_ * no));
      }
    }
  }

  // Payoffs including continuation values.
  const int64_t na = actions_.size();
  std::vector<std::vector<int>> act_digits(na);
  for (int64_t a = 0; a < na; ++a) act_digits[a] = actions_.Decode(a);
  std::vector<std::vector<int>> obs_digits;
  if (!last) {
    const JointIndex obs = game.ObsIndex(t + 1);
    obs_digits.resize(obs.size());
    for (int64_t o = 0; o < obs.size(); ++o) obs_digits[o] = obs.Decode(o);
  }
  payoffs_.resize(n);
  for (int i = 0; i < n; ++i) {
    payoffs_[i].assign(static_cast<size_t>(num_states_) * num_types_[i] * na,
                       0.0);
    for (int x = 0; x < num_states_; ++x) {
      for (int s = 0; s < num_types_[i]; ++s) {
        for (int64_t a = 0; a < na; ++a) {
          double q = game.Utility(t, i, x, static_cast<int>(a));
          if (!last) {
            const int row = x * static_cast<int>(na) + static_cast<int>(a);
            for (int xn = 0; xn < game.NumStates(t + 1); ++xn) {
              const double px = game.transition[t](row, xn);
              if (px == 0) continue;
              auto orow = game.observation[t + 1].Row(
                  game.ObsRow(t + 1, xn, static_cast<int>(a)));
              for (size_t o = 0; o < obs_digits.size(); ++o) {
                if (orow[o] == 0) continue;
                const auto& od = obs_digits[o];
                const int sn = maps.Phi(game, t + 1, i, s, od[i + 1], od[0],
                                        act_digits[a][i]);
                q += px * orow[o] * children[od[0]][i][sn];
              }
            }
          }
          payoffs_[i][(static_cast<int64_t>(x) * num_types_[i] + s) * na +
                      a] = q;
        }
      }
    }
  }
}

void StageGame::InterimPayoffs(int i, int s, const StageStrategy& sigma,
                               std::span<double> out) const {
  const int n = num_agents();
  std::fill(out.begin(), out.end(), 0.0);
  const int64_t no = other_types_[i].size();
  const int64_t na = actions_.size();
  const std::vector<double>& b = beliefs_[i][s];
  std::vector<int> ad(n);
  for (int x = 0; x < num_states_; ++x) {
    for (int64_t o = 0; o < no; ++o) {
      const double bx = b[x * no + o];
      if (bx == 0) continue;
      const int* types = &other_digits_[i][o * n];
      for (int64_t a = 0; a < na; ++a) {
        actions_.Decode(a, ad);
        double w = bx;
        for (int j = 0; j < n && w != 0; ++j) {
          if (j != i) w *= sigma.Prob(j, types[j], ad[j]);
        }
        if (w == 0) continue;
        out[ad[i]] += w * payoff(i, x, s, a);
      }
    }
  }
}

double StageGame::InterimValue(int i, int s,
                               const StageStrategy& sigma) const {
  std::vector<double> r(num_actions(i));
  InterimPayoffs(i, s, sigma, r);
  double v = 0;
  for (int a = 0; a < num_actions(i); ++a) v += sigma.Prob(i, s, a) * r[a];
  return v;
}

std::vector<std::vector<double>> StageGame::TypeRegrets(
    const StageStrategy& sigma) const {
  std::vector<std::vector<double>> out(num_agents());
  for (int i = 0; i < num_agents(); ++i) {
    out[i].assign(num_types_[i], 0.0);
    if (num_actions(i) < 2) continue;
    std::vector<double> r(num_actions(i));
    for (int s = 0; s < num_types_[i]; ++s) {
      InterimPayoffs(i, s, sigma, r);
      double best = -std::numeric_limits<double>::infinity();
      double v = 0;
      for (int a = 0; a < num_actions(i); ++a) {
        best = std::max(best, r[a]);
        v += sigma.Prob(i, s, a) * r[a];
      }
      out[i][s] = std::max(0.0, best - v);
    }
  }
  return out;
}

double StageGame::Regret(const StageStrategy& sigma) const {
  double worst = 0;
  for (const auto& row : TypeRegrets(sigma)) {
    for (double r : row) worst = std::max(worst, r);
  }
  return worst;
}

StageStrategy StageGame::UniformStrategy() const {
  StageStrategy s;
  const int n = num_agents();
  s.num_actions.resize(n);
  s.num_types = num_types_;
  s.tables.resize(n);
  for (int i = 0; i < n; ++i) {
    s.num_actions[i] = num_actions(i);
    s.tables[i].assign(static_cast<size_t>(num_actions(i)) * num_types_[i],
                       1.0 / num_actions(i));
  }
  return s;
}

std::string StageGame::Describe(const FiniteGame& game,
                                const CompressionMaps& maps) const {
  std::ostringstream out;
  out.precision(10);
  const int n = num_agents();
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < num_types_[i]; ++s) {
      out << "agent " << game.agents[i] << " type " << maps.sets[t_][i][s]
          << " mass " << type_mass_[i][s] << "\n  belief";
      const int64_t no = other_types_[i].size();
      for (int x = 0; x < num_states_; ++x) {
        for (int64_t o = 0; o < no; ++o) {
          const double b = beliefs_[i][s][x * no + o];
          if (b == 0) continue;
          out << " [" << game.states[t_][x];
          for (int j = 0; j < n; ++j) {
            if (j != i) out << " " << maps.sets[t_][j][OtherType(i, o, j)];
          }
          out << "]=" << b;
        }
      }
      out << "\n  payoff";
      std::vector<int> ad(n);
      for (int x = 0; x < num_states_; ++x) {
        for (int64_t a = 0; a < actions_.size(); ++a) {
          actions_.Decode(a, ad);
          out << " (" << game.states[t_][x];
          for (int j = 0; j < n; ++j) out << " " << game.actions[t_][j][ad[j]];
          out << ")=" << payoff(i, x, s, a);
        }
      }
      out << "\n";
    }
  }
  return out.str();
}

std::vector<TieFlag> FindTies(const StageGame& stage,
                              const StageStrategy& sigma, double eps) {
  std::vector<TieFlag> ties;
  for (int i = 0; i < stage.num_agents(); ++i) {
    if (stage.num_actions(i) < 2) continue;
    std::vector<double> r(stage.num_actions(i));
    for (int s = 0; s < stage.num_types(i); ++s) {
      stage.InterimPayoffs(i, s, sigma, r);
      const double best = *std::max_element(r.begin(), r.end());
      TieFlag tie{i, s, {}};
      for (int a = 0; a < stage.num_actions(i); ++a) {
        if (r[a] >= best - eps) tie.actions.push_back(a);
      }
      if (tie.actions.size() > 1) ties.push_back(std::move(tie));
    }
  }
  return ties;
}

namespace {

std::vector<int> ActiveAgents(const StageGame& stage) {
  std::vector<int> active;
  for (int i = 0; i < stage.num_agents(); ++i) {
    if (stage.num_actions(i) >= 2) active.push_back(i);
  }
  return active;
}

bool IsEquilibrium(const StageGame& stage, const StageStrategy& sigma,
                   double eps) {
  for (int i = 0; i < stage.num_agents(); ++i) {
    if (stage.num_actions(i) < 2) continue;
    std::vector<double> r(stage.num_actions(i));
    for (int s = 0; s < stage.num_types(i); ++s) {
      stage.InterimPayoffs(i, s, sigma, r);
      double best = r[0];
      double v = 0;
      for (int a = 0; a < stage.num_actions(i); ++a) {
        best = std::max(best, r[a]);
        v += sigma.Prob(i, s, a) * r[a];
      }
      if (best - v > eps) return false;
    }
  }
  return true;
}

class Collector {
 public:
  Collector(const StageGame& stage, const StageSolveOptions& options)
      : stage_(stage), options_(options) {}

  // Returns false once the cap is reached.
  bool Add(const StageStrategy& sigma) {
    for (const auto& e : solution_.equilibria) {
      if (StageDistance(e, sigma) <= 1e-9) return true;
    }
    if (static_cast<int>(solution_.equilibria.size()) >=
        options_.max_equilibria) {
      solution_.truncated = true;
      return false;
    }
    solution_.equilibria.push_back(sigma);
    solution_.ties.push_back(FindTies(stage_, sigma, options_.eps_br));
    return true;
  }
  bool full() const {
    return static_cast<int>(solution_.equilibria.size()) >=
           options_.max_equilibria;
  }
  StageSolution& solution() { return solution_; }

 private:
  const StageGame& stage_;
  const StageSolveOptions& options_;
  StageSolution solution_;
};

// One active agent: every type best-responds independently, so the pure
// equilibria are the product of per-type best-response sets.
void SolveSingleAgent(const StageGame& stage, int i, Collector* out) {
  const StageStrategy base = stage.UniformStrategy();
  std::vector<std::vector<int>> best(stage.num_types(i));
  std::vector<double> r(stage.num_actions(i));
  for (int s = 0; s < stage.num_types(i); ++s) {
    stage.InterimPayoffs(i, s, base, r);
    const double top = *std::max_element(r.begin(), r.end());
    for (int a = 0; a < stage.num_actions(i); ++a) {
      if (r[a] >= top - 1e-12) best[s].push_back(a);
    }
  }
  std::vector<int> pick(stage.num_types(i), 0);
  while (true) {
    StageStrategy sigma = base;
    for (int s = 0; s < stage.num_types(i); ++s) {
      auto row = sigma.MutableRow(i, s);
      std::fill(row.begin(), row.end(), 0.0);
      row[best[s][pick[s]]] = 1.0;
    }
    if (!out->Add(sigma)) return;
    int k = stage.num_types(i) - 1;
    while (k >= 0 && ++pick[k] == static_cast<int>(best[k].size())) {
      pick[k--] = 0;
    }
    if (k < 0) return;
  }
}

void EnumeratePure(const StageGame& stage, const std::vector<int>& active,
                   const StageSolveOptions& options, Collector* out) {
  struct Slot {
    int agent;
    int type;
  };
  std::vector<Slot> slots;
  for (int i : active) {
    for (int s = 0; s < stage.num_types(i); ++s) slots.push_back({i, s});
  }
  StageStrategy sigma = stage.UniformStrategy();
  std::vector<int> pick(slots.size(), 0);
  auto apply = [&](size_t k) {
    auto row = sigma.MutableRow(slots[k].agent, slots[k].type);
    std::fill(row.begin(), row.end(), 0.0);
    row[pick[k]] = 1.0;
  };
  for (size_t k = 0; k < slots.size(); ++k) apply(k);
  while (true) {
    if (IsEquilibrium(stage, sigma, options.eps_br)) {
      if (!out->Add(sigma)) return;
    }
    int k = static_cast<int>(slots.size()) - 1;
    while (k >= 0) {
      if (++pick[k] < stage.num_actions(slots[k].agent)) {
        apply(k);
        break;
      }
      pick[k] = 0;
      apply(k);
      --k;
    }
    if (k < 0) return;
  }
}

// Interim payoffs of a two-agent Bayesian game as bimatrices over
// (type, action) pairs: A[(k,a)][(l,b)] for agent i1, B for agent i2.
struct Bimatrix {
  int k1, k2, m1, m2, n1, n2;
  std::vector<double> A, B;
};

Bimatrix MakeBimatrix(const StageGame& stage, int i1, int i2) {
  Bimatrix bm;
  bm.k1 = stage.num_types(i1);
  bm.k2 = stage.num_types(i2);
  bm.m1 = stage.num_actions(i1);
  bm.m2 = stage.num_actions(i2);
  bm.n1 = bm.k1 * bm.m1;
  bm.n2 = bm.k2 * bm.m2;
  const int k1 = bm.k1, k2 = bm.k2, m1 = bm.m1, m2 = bm.m2, n2 = bm.n2;
  const int n = stage.num_agents();
  std::vector<double>& A = bm.A;
  std::vector<double>& B = bm.B;
  A.assign(static_cast<size_t>(bm.n1) * n2, 0.0);
  B.assign(static_cast<size_t>(bm.n1) * n2, 0.0);
  std::vector<int> ad(n, 0);
  auto joint = [&](int a, int b) {
    std::fill(ad.begin(), ad.end(), 0);
    ad[i1] = a;
    ad[i2] = b;
    return stage.actions().Encode(ad);
  };
  for (int k = 0; k < k1; ++k) {
    const int64_t no = stage.other_types(i1).size();
    for (int x = 0; x < stage.num_states(); ++x) {
      for (int64_t o = 0; o < no; ++o) {
        const double bx = stage.belief(i1, k)[x * no + o];
        if (bx == 0) continue;
        const int l = stage.OtherType(i1, o, i2);
        for (int a = 0; a < m1; ++a) {
          for (int b = 0; b < m2; ++b) {
            A[(k * m1 + a) * n2 + l * m2 + b] +=
                bx * stage.payoff(i1, x, k, joint(a, b));
          }
        }
      }
    }
  }
  for (int l = 0; l < k2; ++l) {
    const int64_t no = stage.other_types(i2).size();
    for (int x = 0; x < stage.num_states(); ++x) {
      for (int64_t o = 0; o < no; ++o) {
        const double bx = stage.belief(i2, l)[x * no + o];
        if (bx == 0) continue;
        const int k = stage.OtherType(i2, o, i1);
        for (int a = 0; a < m1; ++a) {
          for (int b = 0; b < m2; ++b) {
            B[(k * m1 + a) * n2 + l * m2 + b] +=
                bx * stage.payoff(i2, x, l, joint(a, b));
          }
        }
      }
    }
  }
  return bm;
}

// Lemke's algorithm on the linear complementarity problem of a two-agent
// Bayesian game whose strategy sets are products of simplices (one simplex
// per type):
//   w = q + M z >= 0, z >= 0, w'z = 0, z = (x, y, p, r),
// with the complementary pivoting path started by covering vector d.
std::optional<StageStrategy> Lemke(const StageGame& stage, int i1, int i2,
                                   const std::vector<double>& cover) {
  Bimatrix bm = MakeBimatrix(stage, i1, i2);
  const int k1 = bm.k1, k2 = bm.k2, m1 = bm.m1, m2 = bm.m2;
  const int n1 = bm.n1, n2 = bm.n2;
  std::vector<double>& A = bm.A;
  std::vector<double>& B = bm.B;
  // Turn payoffs into strictly positive costs.
  const double amax = *std::max_element(A.begin(), A.end());
  const double bmax = *std::max_element(B.begin(), B.end());
  for (double& v : A) v = amax + 1.0 - v;
  for (double& v : B) v = bmax + 1.0 - v;

  const int N = n1 + n2 + k1 + k2;
  std::vector<double> M(static_cast<size_t>(N) * N, 0.0);
  std::vector<double> q(N, 0.0);
  auto m = [&](int r, int c) -> double& { return M[r * N + c]; };
  for (int r = 0; r < n1; ++r) {
    for (int c = 0; c < n2; ++c) m(r, n1 + c) = A[r * n2 + c];
    m(r, n1 + n2 + r / m1) = -1.0;
  }
  for (int r = 0; r < n2; ++r) {
    for (int c = 0; c < n1; ++c) m(n1 + r, c) = B[c * n2 + r];
    m(n1 + r, n1 + n2 + k1 + r / m2) = -1.0;
  }
  for (int k = 0; k < k1; ++k) {
    for (int a = 0; a < m1; ++a) m(n1 + n2 + k, k * m1 + a) = 1.0;
    q[n1 + n2 + k] = -1.0;
  }
  for (int l = 0; l < k2; ++l) {
    for (int b = 0; b < m2; ++b) m(n1 + n2 + k1 + l, n1 + l * m2 + b) = 1.0;
    q[n1 + n2 + k1 + l] = -1.0;
  }

  // Tableau columns: w (0..N-1), z (N..2N-1), z0 (2N), rhs (2N+1).
  const int cols = 2 * N + 2;
  std::vector<double> tab(static_cast<size_t>(N) * cols, 0.0);
  auto T = [&](int r, int c) -> double& { return tab[r * cols + c]; };
  std::vector<int> basis(N);
  for (int r = 0; r < N; ++r) {
    T(r, r) = 1.0;
    for (int c = 0; c < N; ++c) T(r, N + c) = -m(r, c);
    T(r, 2 * N) = -cover[r];
    T(r, 2 * N + 1) = q[r];
    basis[r] = r;
  }
  auto pivot = [&](int pr, int pc) {
    const double piv = T(pr, pc);
    for (int c = 0; c < cols; ++c) T(pr, c) /= piv;
    for (int r = 0; r < N; ++r) {
      if (r == pr) continue;
      const double f = T(r, pc);
      if (f == 0) continue;
      for (int c = 0; c < cols; ++c) T(r, c) -= f * T(pr, c);
    }
    basis[pr] = pc;
  };
  // Lexicographic minimum ratio test over rows with positive coefficient.
  auto ratio_test = [&](int col, bool initial) -> int {
    int best = -1;
    for (int r = 0; r < N; ++r) {
      const double coef = initial ? -T(r, col) : T(r, col);
      if (coef <= 1e-12) continue;
      if (best < 0) {
        best = r;
        continue;
      }
      const double cb = initial ? -T(best, col) : T(best, col);
      // The initial step picks the most negative q_r / d_r; later steps
      // the smallest ratio. Both compare lexicographically.
      for (int c = -1; c < N; ++c) {
        const int cc = c < 0 ? 2 * N + 1 : c;
        const double vr = T(r, cc) / coef, vb = T(best, cc) / cb;
        if (vr < vb - 1e-13) {
          best = r;
          break;
        }
        if (vr > vb + 1e-13) break;
      }
    }
    return best;
  };

  int leave = ratio_test(2 * N, true);
  if (leave < 0) return std::nullopt;
  int leaving_var = basis[leave];
  pivot(leave, 2 * N);
  for (int iter = 0; iter < 50 * N; ++iter) {
    const int entering = leaving_var < N ? leaving_var + N : leaving_var - N;
    const int r = ratio_test(entering, false);
    if (r < 0) return std::nullopt;  // secondary ray
    leaving_var = basis[r];
    pivot(r, entering);
    if (leaving_var == 2 * N) {
      std::vector<double> z(N, 0.0);
      for (int rr = 0; rr < N; ++rr) {
        if (basis[rr] >= N && basis[rr] < 2 * N) {
          z[basis[rr] - N] = T(rr, 2 * N + 1);
        }
      }
      StageStrategy sigma = stage.UniformStrategy();
      auto fill = [&](int agent, int types, int acts, int offset) {
        for (int s = 0; s < types; ++s) {
          auto row = sigma.MutableRow(agent, s);
          double sum = 0;
          for (int a = 0; a < acts; ++a) {
            row[a] = std::max(0.0, z[offset + s * acts + a]);
            if (row[a] < 1e-14) row[a] = 0;
            sum += row[a];
          }
          if (sum <= 0) return false;
          for (double& v : row) v /= sum;
        }
        return true;
      };
      if (!fill(i1, k1, m1, 0) || !fill(i2, k2, m2, n1)) return std::nullopt;
      return sigma;
    }
  }
  return std::nullopt;
}

// Solves rows x cols system M z = rhs by Gauss-Jordan elimination with
// partial pivoting. Free variables are set to zero. Returns nullopt if the
// system is inconsistent.
std::optional<std::vector<double>> SolveLinear(std::vector<double> M,
                                               std::vector<double> rhs,
                                               int rows, int cols) {
  double scale = 1.0;
  for (double v : M) scale = std::max(scale, std::abs(v));
  const double tol = 1e-11 * scale;
  std::vector<int> pivot_col(rows, -1);
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int best = r;
    for (int i = r + 1; i < rows; ++i) {
      if (std::abs(M[i * cols + c]) > std::abs(M[best * cols + c])) best = i;
    }
    if (std::abs(M[best * cols + c]) <= tol) continue;
    if (best != r) {
      for (int j = 0; j < cols; ++j) {
        std::swap(M[r * cols + j], M[best * cols + j]);
      }
      std::swap(rhs[r], rhs[best]);
    }
    const double piv = M[r * cols + c];
    for (int j = 0; j < cols; ++j) M[r * cols + j] /= piv;
    rhs[r] /= piv;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      const double f = M[i * cols + c];
      if (f == 0) continue;
      for (int j = 0; j < cols; ++j) M[i * cols + j] -= f * M[r * cols + j];
      rhs[i] -= f * rhs[r];
    }
    pivot_col[r++] = c;
  }
  for (int i = r; i < rows; ++i) {
    if (std::abs(rhs[i]) > 1e-9 * scale) return std::nullopt;
  }
  std::vector<double> z(cols, 0.0);
  for (int i = 0; i < r; ++i) z[pivot_col[i]] = rhs[i];
  return z;
}

// Mixed strategies of the other agent that make every type of one agent
// indifferent over its support. `pay` is indexed [(k,a)][(l,b)] of the
// agent whose indifference is imposed; `own`/`other` are support masks per
// type. Returns the other agent's mixture indexed (l,b).
std::optional<std::vector<double>> IndifferenceMix(
    const std::vector<double>& pay, bool transposed, int k1, int m1, int k2,
    int m2, const std::vector<uint32_t>& own,
    const std::vector<uint32_t>& other) {
  // Unknowns: mixture entries on the other agent's support, then one value
  // per own type.
  std::vector<int> var;  // (l * m2 + b) for each mixture unknown
  for (int l = 0; l < k2; ++l) {
    for (int b = 0; b < m2; ++b) {
      if (other[l] >> b & 1) var.push_back(l * m2 + b);
    }
  }
  const int nv = static_cast<int>(var.size()) + k1;
  int rows = k2;
  for (int k = 0; k < k1; ++k) rows += std::popcount(own[k]);
  std::vector<double> M(static_cast<size_t>(rows) * nv, 0.0);
  std::vector<double> rhs(rows, 0.0);
  const int n_other = k2 * m2;
  const int n_own = k1 * m1;
  int r = 0;
  for (int k = 0; k < k1; ++k) {
    for (int a = 0; a < m1; ++a) {
      if (!(own[k] >> a & 1)) continue;
      for (size_t j = 0; j < var.size(); ++j) {
        const int row = k * m1 + a;
        M[r * nv + j] = transposed ? pay[var[j] * n_own + row]
                                   : pay[row * n_other + var[j]];
      }
      M[r * nv + var.size() + k] = -1.0;
      ++r;
    }
  }
  for (int l = 0; l < k2; ++l) {
    for (size_t j = 0; j < var.size(); ++j) {
      if (var[j] / m2 == l) M[r * nv + j] = 1.0;
    }
    rhs[r++] = 1.0;
  }
  auto z = SolveLinear(std::move(M), std::move(rhs), rows, nv);
  if (!z) return std::nullopt;
  std::vector<double> mix(n_other, 0.0);
  for (size_t j = 0; j < var.size(); ++j) {
    if ((*z)[j] < -1e-12) return std::nullopt;
    mix[var[j]] = std::max(0.0, (*z)[j]);
  }
  return mix;
}

// Support enumeration for two active agents: every combination of
// per-type supports is tried and the indifference conditions are solved
// exactly. Equilibria of degenerate games that need a continuum of
// mixtures are represented by a vertex of that continuum.
void EnumerateSupports(const StageGame& stage, int i1, int i2,
                       const StageSolveOptions& options, Collector* out) {
  const Bimatrix bm = MakeBimatrix(stage, i1, i2);
  const int k1 = bm.k1, k2 = bm.k2, m1 = bm.m1, m2 = bm.m2;
  std::vector<uint32_t> s1(k1, 1), s2(k2, 1);
  const uint32_t top1 = (1u << m1) - 1, top2 = (1u << m2) - 1;
  StageStrategy sigma = stage.UniformStrategy();
  auto fill = [&](int agent, int types, int acts,
                  const std::vector<double>& mix) {
    for (int s = 0; s < types; ++s) {
      auto row = sigma.MutableRow(agent, s);
      double sum = 0;
      for (int a = 0; a < acts; ++a) sum += row[a] = mix[s * acts + a];
      if (sum <= 0) return false;
      for (double& v : row) v /= sum;
    }
    return true;
  };
  while (true) {
    // Agent i2's mixture makes i1 indifferent on s1, and vice versa.
    auto y = IndifferenceMix(bm.A, false, k1, m1, k2, m2, s1, s2);
    if (y) {
      auto x = IndifferenceMix(bm.B, true, k2, m2, k1, m1, s2, s1);
      if (x && fill(i1, k1, m1, *x) && fill(i2, k2, m2, *y) &&
          IsEquilibrium(stage, sigma, options.eps_br)) {
        if (!out->Add(sigma)) return;
      }
    }
    int k = k2 - 1;
    while (k >= 0 && ++s2[k] > top2) s2[k--] = 1;
    if (k >= 0) continue;
    k = k1 - 1;
    while (k >= 0 && ++s1[k] > top1) s1[k--] = 1;
    if (k < 0) return;
  }
}

StageStrategy BestResponse(const StageGame& stage, const StageStrategy& sigma) {
  StageStrategy out = sigma;
  for (int i = 0; i < stage.num_agents(); ++i) {
    std::vector<double> r(stage.num_actions(i));
    for (int s = 0; s < stage.num_types(i); ++s) {
      stage.InterimPayoffs(i, s, sigma, r);
      const int best =
          static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
      auto row = out.MutableRow(i, s);
      std::fill(row.begin(), row.end(), 0.0);
      row[best] = 1.0;
    }
  }
  return out;
}

}  // namespace

StageSolution SolveStageBne(const StageGame& stage,
                            const StageSolveOptions& options) {
  Collector out(stage, options);
  const std::vector<int> active = ActiveAgents(stage);
  if (active.empty()) {
    out.Add(stage.UniformStrategy());
    return std::move(out.solution());
  }
  if (active.size() == 1) {
    SolveSingleAgent(stage, active[0], &out);
    return std::move(out.solution());
  }

  double pure_count = 1;
  for (int i : active) {
    pure_count *= std::pow(static_cast<double>(stage.num_actions(i)),
                           stage.num_types(i));
  }
  if (pure_count <= static_cast<double>(options.pure_cap)) {
    EnumeratePure(stage, active, options, &out);
  }
  double best_regret = std::numeric_limits<double>::infinity();
  bool enumerated = false;
  if (active.size() == 2 && !out.full()) {
    double supports = 1;
    for (int i : active) {
      if (stage.num_actions(i) > 20) supports = HUGE_VAL;
      supports *= std::pow(std::ldexp(1.0, stage.num_actions(i)) - 1,
                           stage.num_types(i));
    }
    if (supports <= static_cast<double>(options.support_cap)) {
      EnumerateSupports(stage, active[0], active[1], options, &out);
      enumerated = true;
    }
  }
  if (active.size() == 2 && !out.full() &&
      (!enumerated || out.solution().equilibria.empty())) {
    const int N = stage.num_types(active[0]) * stage.num_actions(active[0]) +
                  stage.num_types(active[1]) * stage.num_actions(active[1]) +
                  stage.num_types(active[0]) + stage.num_types(active[1]);
    Rng rng(options.seed);
    for (int k = 0; k < options.lemke_restarts && !out.full(); ++k) {
      std::vector<double> cover(N, 1.0);
      if (k > 0) {
        for (double& d : cover) d = 0.5 + UniformDouble(rng);
      }
      auto sigma = Lemke(stage, active[0], active[1], cover);
      if (!sigma) continue;
      const double regret = stage.Regret(*sigma);
      best_regret = std::min(best_regret, regret);
      if (regret <= options.eps_br) out.Add(*sigma);
    }
  }
  if (out.solution().equilibria.empty()) {
    // Fictitious play as a last resort.
    StageStrategy sigma = stage.UniformStrategy();
    for (int k = 0; k < options.br_iterations; ++k) {
      const double regret = stage.Regret(sigma);
      best_regret = std::min(best_regret, regret);
      if (regret <= options.eps_br) {
        out.Add(sigma);
        break;
      }
      sigma = MixStage(sigma, BestResponse(stage, sigma), 1.0 / (k + 2));
    }
  }
  if (out.solution().equilibria.empty()) {
    throw NoEquilibriumFound("no stage equilibrium found at t=" +
                                 std::to_string(stage.t() + 1),
                             best_regret);
  }
  return std::move(out.solution());
}

std::vector<std::vector<double>> ValueUpdate(const StageGame& stage,
                                             const StageStrategy& sigma) {
  std::vector<std::vector<double>> values(stage.num_agents());
  for (int i = 0; i < stage.num_agents(); ++i) {
    values[i].resize(stage.num_types(i));
    for (int s = 0; s < stage.num_types(i); ++s) {
      values[i][s] = stage.InterimValue(i, s, sigma);
    }
  }
  return values;
}

}  // namespace sibeq
