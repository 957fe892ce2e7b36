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

#include "sibeq/spec_io.h"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sibeq/errors.h"
#include "sibeq/history.h"

namespace sibeq {
namespace {

constexpr char kWildcard[] = "*";
constexpr char kNull[] = "none";

bool Present(const YAML::Node& n) { return n.IsDefined() && !n.IsNull(); }

[[noreturn]] void Fail(const YAML::Node& node, const std::string& what) {
  int line = 0;
  int column = 0;
  if (node.IsDefined() && !node.IsNull()) {
    const YAML::Mark mark = node.Mark();
    if (mark.line >= 0) {
      line = mark.line + 1;
      column = mark.column + 1;
    }
  }
  throw ParseError(what, line, column);
}

YAML::Node Require(const YAML::Node& parent, const std::string& key) {
  if (!parent.IsMap()) Fail(parent, "expected a mapping with key '" + key + "'");
  YAML::Node n = parent[key];
  if (!Present(n) || n.IsNull()) Fail(parent, "missing key '" + key + "'");
  return n;
}

YAML::Node Optional(const YAML::Node& parent, const std::string& key) {
  if (!parent.IsMap()) Fail(parent, "expected a mapping");
  YAML::Node n = parent[key];
  if (!Present(n) || n.IsNull()) return YAML::Node();
  return n;
}

std::string Scalar(const YAML::Node& node) {
  if (!node.IsScalar()) Fail(node, "expected a scalar");
  return node.Scalar();
}

double Number(const YAML::Node& node) {
  const std::string s = Scalar(node);
  // Accept plain decimals and simple fractions such as 1/3.
  const size_t slash = s.find('/');
  char* end = nullptr;
  if (slash == std::string::npos) {
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') Fail(node, "expected a number, got '" + s + "'");
    return v;
  }
  const std::string num = s.substr(0, slash);
  const std::string den = s.substr(slash + 1);
  const double a = std::strtod(num.c_str(), &end);
  if (num.empty() || *end != '\0') Fail(node, "bad fraction '" + s + "'");
  const double b = std::strtod(den.c_str(), &end);
  if (den.empty() || *end != '\0' || b == 0) Fail(node, "bad fraction '" + s + "'");
  return a / b;
}

int Integer(const YAML::Node& node) {
  const double v = Number(node);
  if (v != std::floor(v) || std::abs(v) > 1e9) Fail(node, "expected an integer");
  return static_cast<int>(v);
}

LabelSet Labels(const YAML::Node& node, const std::string& what) {
  if (!node.IsSequence()) Fail(node, what + ": expected a list of labels");
  LabelSet out;
  for (const YAML::Node& item : node) {
    const std::string label = Scalar(item);
    if (label == kWildcard) Fail(item, "'*' is reserved and cannot be a label");
    out.push_back(label);
  }
  if (out.empty()) Fail(node, what + " is empty");
  return out;
}

// A flat list applies to every period; a list of lists gives one per period.
std::vector<LabelSet> PerTimeSets(const YAML::Node& node, int T,
                                  const std::string& what) {
  if (!node.IsSequence() || node.size() == 0) {
    Fail(node, what + ": expected a non-empty list");
  }
  std::vector<LabelSet> out;
  if (node[0].IsSequence()) {
    if (static_cast<int>(node.size()) != T) {
      Fail(node, what + ": expected " + std::to_string(T) + " per-period lists");
    }
    for (const YAML::Node& item : node) out.push_back(Labels(item, what));
  } else {
    out.assign(T, Labels(node, what));
  }
  return out;
}

int FindLabel(const LabelSet& set, const std::string& label) {
  for (int k = 0; k < static_cast<int>(set.size()); ++k) {
    if (set[k] == label) return k;
  }
  return -1;
}

int LabelIndex(const LabelSet& set, const YAML::Node& node,
               const std::string& what) {
  const int k = FindLabel(set, Scalar(node));
  if (k < 0) Fail(node, "unknown " + what + " '" + node.Scalar() + "'");
  return k;
}

// One table row with an optional period and a `given` pattern.
struct Row {
  YAML::Node node;
  int t = -1;  // 0-based; -1 applies to every period
  std::vector<std::string> given;
  bool used = false;
};

std::vector<Row> ReadRows(const YAML::Node& section, int T,
                          const std::string& what) {
  std::vector<Row> rows;
  if (!Present(section) || section.IsNull()) return rows;
  if (!section.IsSequence()) Fail(section, what + ": expected a list of rows");
  for (const YAML::Node& item : section) {
    if (!item.IsMap()) Fail(item, what + ": each row must be a mapping");
    Row row;
    row.node = item;
    const YAML::Node t = Optional(item, "t");
    if (Present(t) && !(t.IsScalar() && t.Scalar() == kWildcard)) {
      row.t = Integer(t) - 1;
      if (row.t < 0 || row.t >= T) Fail(t, what + ": period out of range");
    }
    const YAML::Node given = Optional(item, "given");
    if (Present(given)) {
      if (!given.IsSequence()) Fail(given, "'given' must be a list");
      for (const YAML::Node& g : given) row.given.push_back(Scalar(g));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

bool Matches(const Row& row, int t, const std::vector<std::string>& labels) {
  if (row.t >= 0 && row.t != t) return false;
  // Omitted trailing components act as wildcards; extra ones are ignored,
  // so observation rows keyed by (x, a_prev) also serve t = 1.
  const size_t n = std::min(row.given.size(), labels.size());
  for (size_t k = 0; k < n; ++k) {
    if (row.given[k] != kWildcard && row.given[k] != labels[k]) return false;
  }
  return true;
}

Row* FirstMatch(std::vector<Row>& rows, int t,
                const std::vector<std::string>& labels) {
  for (Row& row : rows) {
    if (Matches(row, t, labels)) {
      row.used = true;
      return &row;
    }
  }
  return nullptr;
}

bool AnyRowAt(const std::vector<Row>& rows, int t) {
  for (const Row& row : rows) {
    if (row.t < 0 || row.t == t) return true;
  }
  return false;
}

void CheckAllUsed(const std::vector<Row>& rows, const std::string& what) {
  for (const Row& row : rows) {
    if (!row.used) Fail(row.node, what + ": row matches no entry");
  }
}

std::string Join(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t k = 0; k < parts.size(); ++k) {
    if (k > 0) out += ", ";
    out += parts[k];
  }
  return out;
}

// Reads {label: probability} into a dense vector.
std::vector<double> Distribution(const YAML::Node& node, const LabelSet& set,
                                 const std::string& what) {
  if (!node.IsMap()) Fail(node, what + ": expected {label: probability}");
  std::vector<double> out(set.size(), 0.0);
  for (const auto& kv : node) {
    const int k = LabelIndex(set, kv.first, "label in " + what);
    out[k] += Number(kv.second);
  }
  return out;
}

// Labels of x and the joint action at (t, x, a).
std::vector<std::string> StateActionLabels(const FiniteGame& g, int t, int x,
                                           int a) {
  std::vector<std::string> labels = {g.states[t][x]};
  if (t < 0) return labels;
  const std::vector<int> digits = g.ActionIndex(t).Decode(a);
  for (int i = 0; i < g.num_agents(); ++i) {
    labels.push_back(g.actions[t][i][digits[i]]);
  }
  return labels;
}

// Labels of (x_t, a_{t-1}); only x at t = 0.
std::vector<std::string> ObsConditionLabels(const FiniteGame& g, int t, int x,
                                            int a_prev) {
  if (t == 0) return {g.states[0][x]};
  std::vector<std::string> labels = {g.states[t][x]};
  const std::vector<int> digits = g.ActionIndex(t - 1).Decode(a_prev);
  for (int i = 0; i < g.num_agents(); ++i) {
    labels.push_back(g.actions[t - 1][i][digits[i]]);
  }
  return labels;
}

YAML::Node AgentSection(const YAML::Node& section, const FiniteGame& g,
                        const std::string& agent, const std::string& what) {
  if (!Present(section)) return YAML::Node();
  if (!section.IsMap()) Fail(section, what + ": expected a mapping by agent");
  for (const auto& kv : section) {
    if (FindLabel(g.agents, Scalar(kv.first)) < 0) {
      Fail(kv.first, what + ": unknown agent '" + kv.first.Scalar() + "'");
    }
  }
  YAML::Node n = section[agent];
  if (!Present(n) || n.IsNull()) return YAML::Node();
  return n;
}

Kernel ReadObsPart(std::vector<Row>& rows, const FiniteGame& g, int t,
                   const LabelSet& outcomes, const YAML::Node& section,
                   const std::string& what) {
  const int rows_n = g.NumStates(t) * g.NumJointActions(t - 1);
  Kernel k(rows_n, static_cast<int>(outcomes.size()));
  const bool explicit_rows = AnyRowAt(rows, t);
  if (!explicit_rows && outcomes.size() == 1) {
    for (int r = 0; r < rows_n; ++r) k(r, 0) = 1.0;
    return k;
  }
  for (int x = 0; x < g.NumStates(t); ++x) {
    for (int a = 0; a < g.NumJointActions(t - 1); ++a) {
      const auto labels = ObsConditionLabels(g, t, x, a);
      Row* row = FirstMatch(rows, t, labels);
      if (row == nullptr) {
        Fail(section, what + ": no row for t=" + std::to_string(t + 1) +
                          " given (" + Join(labels) + ")");
      }
      const auto dist = Distribution(Require(row->node, "dist"), outcomes, what);
      const int r = g.ObsRow(t, x, a);
      for (size_t o = 0; o < dist.size(); ++o) k(r, static_cast<int>(o)) = dist[o];
    }
  }
  return k;
}

FiniteGame ReadGame(const YAML::Node& root) {
  FiniteGame g;
  const YAML::Node horizon = Require(root, "horizon");
  g.horizon = Integer(horizon);
  if (g.horizon < 1) Fail(horizon, "horizon must be at least 1");
  const int T = g.horizon;
  g.agents = Labels(Require(root, "agents"), "agents");
  const int n = g.num_agents();
  g.states = PerTimeSets(Require(root, "states"), T, "states");

  const YAML::Node actions = Require(root, "actions");
  g.actions.assign(T, std::vector<LabelSet>(n));
  for (int i = 0; i < n; ++i) {
    const YAML::Node a = AgentSection(actions, g, g.agents[i], "actions");
    std::vector<LabelSet> sets =
        Present(a) ? PerTimeSets(a, T, "actions of " + g.agents[i])
                      : std::vector<LabelSet>(T, LabelSet{kNull});
    for (int t = 0; t < T; ++t) g.actions[t][i] = sets[t];
  }

  const YAML::Node obs = Optional(root, "observations");
  g.private_obs.assign(T, std::vector<LabelSet>(n, LabelSet{kNull}));
  g.common_obs.assign(T, LabelSet{kNull});
  if (Present(obs)) {
    const YAML::Node priv = Optional(obs, "private");
    for (int i = 0; i < n; ++i) {
      const YAML::Node y = AgentSection(priv, g, g.agents[i],
                                        "private observations");
      if (!Present(y)) continue;
      const auto sets = PerTimeSets(y, T, "observations of " + g.agents[i]);
      for (int t = 0; t < T; ++t) g.private_obs[t][i] = sets[t];
    }
    const YAML::Node common = Optional(obs, "common");
    if (Present(common)) {
      g.common_obs = PerTimeSets(common, T, "common observations");
    }
  }

  g.initial = Distribution(Require(root, "initial"), g.states[0], "initial");

  // Transitions.
  const YAML::Node trans = Optional(root, "transition");
  std::vector<Row> trows = ReadRows(trans, T, "transition");
  g.transition.resize(T - 1);
  for (int t = 0; t + 1 < T; ++t) {
    g.transition[t] = Kernel(g.NumStates(t) * g.NumJointActions(t),
                             g.NumStates(t + 1));
    for (int x = 0; x < g.NumStates(t); ++x) {
      for (int a = 0; a < g.NumJointActions(t); ++a) {
        const auto labels = StateActionLabels(g, t, x, a);
        Row* row = FirstMatch(trows, t, labels);
        if (row == nullptr) {
          Fail(Present(trans) ? trans : root,
               "transition: no row for t=" + std::to_string(t + 1) +
                   " given (" + Join(labels) + ")");
        }
        const auto next = Distribution(Require(row->node, "next"),
                                       g.states[t + 1], "transition");
        for (size_t k = 0; k < next.size(); ++k) {
          g.transition[t](x * g.NumJointActions(t) + a, static_cast<int>(k)) =
              next[k];
        }
      }
    }
  }
  CheckAllUsed(trows, "transition");

  // Observations: joint rows take precedence over the product of parts.
  const YAML::Node joint = Optional(root, "obs_joint");
  std::vector<Row> jrows = ReadRows(joint, T, "obs_joint");
  const YAML::Node common_section = Optional(root, "obs_common");
  std::vector<Row> crows = ReadRows(common_section, T, "obs_common");
  const YAML::Node private_section = Optional(root, "obs_private");
  std::vector<std::vector<Row>> prows(n);
  for (int i = 0; i < n; ++i) {
    prows[i] = ReadRows(AgentSection(private_section, g, g.agents[i],
                                     "obs_private"),
                        T, "obs_private of " + g.agents[i]);
  }
  g.observation.resize(T);
  for (int t = 0; t < T; ++t) {
    const JointIndex oidx = g.ObsIndex(t);
    const int rows_n = g.NumStates(t) * g.NumJointActions(t - 1);
    if (AnyRowAt(jrows, t)) {
      Kernel k(rows_n, static_cast<int>(oidx.size()));
      for (int x = 0; x < g.NumStates(t); ++x) {
        for (int a = 0; a < g.NumJointActions(t - 1); ++a) {
          const auto labels = ObsConditionLabels(g, t, x, a);
          Row* row = FirstMatch(jrows, t, labels);
          if (row == nullptr) {
            Fail(joint, "obs_joint: no row for t=" + std::to_string(t + 1) +
                            " given (" + Join(labels) + ")");
          }
          const YAML::Node outcomes = Require(row->node, "outcomes");
          if (!outcomes.IsSequence()) Fail(outcomes, "outcomes must be a list");
          std::vector<int> digits(n + 1);
          for (const YAML::Node& o : outcomes) {
            if (!o.IsSequence() || static_cast<int>(o.size()) != n + 2) {
              Fail(o, "outcome must be [z, y per agent, probability]");
            }
            digits[0] = LabelIndex(g.common_obs[t], o[0], "common observation");
            for (int i = 0; i < n; ++i) {
              digits[i + 1] = LabelIndex(g.private_obs[t][i], o[i + 1],
                                         "observation of " + g.agents[i]);
            }
            k(g.ObsRow(t, x, a), static_cast<int>(oidx.Encode(digits))) +=
                Number(o[n + 1]);
          }
        }
      }
      g.observation[t] = std::move(k);
      continue;
    }
    std::vector<Kernel> parts;
    for (int i = 0; i < n; ++i) {
      parts.push_back(ReadObsPart(prows[i], g, t, g.private_obs[t][i],
                                  Present(private_section) ? private_section
                                                              : root,
                                  "obs_private of " + g.agents[i]));
    }
    const Kernel common = ReadObsPart(
        crows, g, t, g.common_obs[t],
        Present(common_section) ? common_section : root, "obs_common");
    g.observation[t] = ProductObservationKernel(g, t, parts, common);
  }
  CheckAllUsed(jrows, "obs_joint");
  CheckAllUsed(crows, "obs_common");
  for (int i = 0; i < n; ++i) CheckAllUsed(prows[i], "obs_private");

  // Utilities; entries without a matching row are zero.
  const YAML::Node util = Optional(root, "utility");
  g.utility.assign(T, std::vector<std::vector<double>>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<Row> urows = ReadRows(
        AgentSection(util, g, g.agents[i], "utility"), T,
        "utility of " + g.agents[i]);
    for (int t = 0; t < T; ++t) {
      g.utility[t][i].assign(g.NumStates(t) * g.NumJointActions(t), 0.0);
      for (int x = 0; x < g.NumStates(t); ++x) {
        for (int a = 0; a < g.NumJointActions(t); ++a) {
          Row* row = FirstMatch(urows, t, StateActionLabels(g, t, x, a));
          if (row == nullptr) continue;
          g.utility[t][i][x * g.NumJointActions(t) + a] =
              Number(Require(row->node, "value"));
        }
      }
    }
    CheckAllUsed(urows, "utility of " + g.agents[i]);
  }
  return g;
}

CompressionMaps ReadCompression(const YAML::Node& node, const FiniteGame& g) {
  const int T = g.horizon;
  const int n = g.num_agents();
  CompressionMaps m;
  const YAML::Node sets = Require(node, "sets");
  m.sets.assign(T, std::vector<LabelSet>(n));
  for (int i = 0; i < n; ++i) {
    const YAML::Node s = AgentSection(sets, g, g.agents[i], "compression sets");
    const auto per_t = Present(s)
                           ? PerTimeSets(s, T, "types of " + g.agents[i])
                           : std::vector<LabelSet>(T, LabelSet{kNull});
    for (int t = 0; t < T; ++t) m.sets[t][i] = per_t[t];
  }
  const YAML::Node phi = Optional(node, "phi");
  m.phi.assign(T, std::vector<std::vector<int>>(n));
  for (int i = 0; i < n; ++i) {
    const YAML::Node section = AgentSection(phi, g, g.agents[i], "phi");
    std::vector<Row> rows = ReadRows(section, T, "phi of " + g.agents[i]);
    for (int t = 0; t < T; ++t) {
      const int64_t size = PhiDomainSize(g, m, t, i);
      m.phi[t][i].assign(size, 0);
      if (m.NumTypes(t, i) == 1 && !AnyRowAt(rows, t)) continue;
      const int ny = g.NumPrivateObs(t, i);
      const int nz = g.NumCommonObs(t);
      for (int64_t k = 0; k < size; ++k) {
        std::vector<std::string> labels;
        if (t == 0) {
          labels = {g.private_obs[0][i][k / nz], g.common_obs[0][k % nz]};
        } else {
          const int na = g.NumActions(t - 1, i);
          const int a = static_cast<int>(k % na);
          const int z = static_cast<int>((k / na) % nz);
          const int y = static_cast<int>((k / na / nz) % ny);
          const int s = static_cast<int>(k / na / nz / ny);
          labels = {m.sets[t - 1][i][s], g.private_obs[t][i][y],
                    g.common_obs[t][z], g.actions[t - 1][i][a]};
        }
        Row* row = FirstMatch(rows, t, labels);
        if (row == nullptr) {
          Fail(Present(section) ? section : node,
               "phi of " + g.agents[i] + ": no row for t=" +
                   std::to_string(t + 1) + " given (" + Join(labels) + ")");
        }
        m.phi[t][i][k] = LabelIndex(m.sets[t][i], Require(row->node, "value"),
                                    "type of " + g.agents[i]);
      }
    }
    CheckAllUsed(rows, "phi of " + g.agents[i]);
  }
  m.zeta = ZetaFromPhi(g, m);
  const YAML::Node zeta = Optional(node, "zeta");
  if (Present(zeta)) {
    const HistorySpace space(g);
    for (int i = 0; i < n; ++i) {
      const YAML::Node section = AgentSection(zeta, g, g.agents[i], "zeta");
      if (!Present(section)) continue;
      std::vector<Row> rows = ReadRows(section, T, "zeta of " + g.agents[i]);
      for (int t = 0; t < T; ++t) {
        const int64_t np = space.PrivateCount(t, i);
        const int64_t nc = space.CommonCount(t);
        for (int64_t p = 0; p < np; ++p) {
          for (int64_t c = 0; c < nc; ++c) {
            const std::vector<std::string> labels = {
                space.PrivateLabel(t, i, p), space.CommonLabel(t, c)};
            Row* row = FirstMatch(rows, t, labels);
            if (row == nullptr) {
              Fail(section, "zeta of " + g.agents[i] + ": no row for t=" +
                                std::to_string(t + 1) + " given (" +
                                Join(labels) + ")");
            }
            m.zeta[t][i][p * nc + c] =
                LabelIndex(m.sets[t][i], Require(row->node, "value"),
                           "type of " + g.agents[i]);
          }
        }
      }
      CheckAllUsed(rows, "zeta of " + g.agents[i]);
    }
  }
  return m;
}

}  // namespace

GameSpec ParseSpec(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  if (!root.IsMap()) throw ParseError("game file must be a YAML mapping", 1, 1);
  GameSpec spec;
  try {
    spec.game = ReadGame(root);
    const YAML::Node comp = Optional(root, "compression");
    const bool identity =
        !Present(comp) ||
        (comp.IsMap() && Present(comp["identity"]) &&
         comp["identity"].IsScalar() && comp["identity"].Scalar() == "true");
    if (identity) {
      spec.maps = IdentityCompression(spec.game);
    } else {
      spec.maps = ReadCompression(comp, spec.game);
      spec.explicit_compression = true;
    }
  } catch (const YAML::Exception& e) {
    // Type conversions on malformed nodes.
    throw ParseError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  return spec;
}

GameSpec ParseSpecFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'", 0, 0);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseSpec(buffer.str());
}

void ValidateSpec(GameSpec* spec) {
  spec->game = ValidateGame(std::move(spec->game));
  ValidateCompression(spec->game, spec->maps);
}

GameSpec LoadSpec(const std::string& path) {
  GameSpec spec = ParseSpecFile(path);
  ValidateSpec(&spec);
  return spec;
}

namespace {

void EmitLabels(YAML::Emitter& out, const LabelSet& set) {
  out << YAML::Flow << YAML::BeginSeq;
  for (const auto& l : set) out << l;
  out << YAML::EndSeq;
}

void EmitPerTime(YAML::Emitter& out, const std::vector<LabelSet>& sets) {
  out << YAML::BeginSeq;
  for (const auto& s : sets) EmitLabels(out, s);
  out << YAML::EndSeq;
}

void EmitGiven(YAML::Emitter& out, const std::vector<std::string>& labels) {
  out << YAML::Key << "given" << YAML::Value;
  EmitLabels(out, labels);
}

}  // namespace

std::string SerializeSpec(const FiniteGame& g, const CompressionMaps* maps) {
  const int T = g.horizon;
  const int n = g.num_agents();
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "horizon" << YAML::Value << T;
  out << YAML::Key << "agents" << YAML::Value;
  EmitLabels(out, g.agents);
  out << YAML::Key << "states" << YAML::Value;
  EmitPerTime(out, g.states);

  auto per_agent = [&](const std::string& key, auto getter) {
    out << YAML::Key << key << YAML::Value << YAML::BeginMap;
    for (int i = 0; i < n; ++i) {
      std::vector<LabelSet> sets(T);
      for (int t = 0; t < T; ++t) sets[t] = getter(t, i);
      out << YAML::Key << g.agents[i] << YAML::Value;
      EmitPerTime(out, sets);
    }
    out << YAML::EndMap;
  };
  per_agent("actions", [&](int t, int i) { return g.actions[t][i]; });
  out << YAML::Key << "observations" << YAML::Value << YAML::BeginMap;
  per_agent("private", [&](int t, int i) { return g.private_obs[t][i]; });
  out << YAML::Key << "common" << YAML::Value;
  EmitPerTime(out, g.common_obs);
  out << YAML::EndMap;

  out << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
  for (int x = 0; x < g.NumStates(0); ++x) {
    out << YAML::Key << g.states[0][x] << YAML::Value << g.initial[x];
  }
  out << YAML::EndMap;

  if (T > 1) {
    out << YAML::Key << "transition" << YAML::Value << YAML::BeginSeq;
    for (int t = 0; t + 1 < T; ++t) {
      for (int x = 0; x < g.NumStates(t); ++x) {
        for (int a = 0; a < g.NumJointActions(t); ++a) {
          out << YAML::BeginMap << YAML::Key << "t" << YAML::Value << t + 1;
          EmitGiven(out, StateActionLabels(g, t, x, a));
          out << YAML::Key << "next" << YAML::Value << YAML::Flow
              << YAML::BeginMap;
          for (int k = 0; k < g.NumStates(t + 1); ++k) {
            const double p = g.transition[t](x * g.NumJointActions(t) + a, k);
            if (p != 0) out << YAML::Key << g.states[t + 1][k] << YAML::Value << p;
          }
          out << YAML::EndMap << YAML::EndMap;
        }
      }
    }
    out << YAML::EndSeq;
  }

  out << YAML::Key << "obs_joint" << YAML::Value << YAML::BeginSeq;
  for (int t = 0; t < T; ++t) {
    const JointIndex oidx = g.ObsIndex(t);
    for (int x = 0; x < g.NumStates(t); ++x) {
      for (int a = 0; a < g.NumJointActions(t - 1); ++a) {
        out << YAML::BeginMap << YAML::Key << "t" << YAML::Value << t + 1;
        EmitGiven(out, ObsConditionLabels(g, t, x, a));
        out << YAML::Key << "outcomes" << YAML::Value << YAML::BeginSeq;
        auto row = g.observation[t].Row(g.ObsRow(t, x, a));
        for (int64_t o = 0; o < oidx.size(); ++o) {
          if (row[o] == 0) continue;
          const std::vector<int> d = oidx.Decode(o);
          out << YAML::Flow << YAML::BeginSeq << g.common_obs[t][d[0]];
          for (int i = 0; i < n; ++i) out << g.private_obs[t][i][d[i + 1]];
          out << row[o] << YAML::EndSeq;
        }
        out << YAML::EndSeq << YAML::EndMap;
      }
    }
  }
  out << YAML::EndSeq;

  out << YAML::Key << "utility" << YAML::Value << YAML::BeginMap;
  for (int i = 0; i < n; ++i) {
    out << YAML::Key << g.agents[i] << YAML::Value << YAML::BeginSeq;
    for (int t = 0; t < T; ++t) {
      for (int x = 0; x < g.NumStates(t); ++x) {
        for (int a = 0; a < g.NumJointActions(t); ++a) {
          const double u = g.Utility(t, i, x, a);
          if (u == 0) continue;
          out << YAML::Flow << YAML::BeginMap << YAML::Key << "t"
              << YAML::Value << t + 1;
          EmitGiven(out, StateActionLabels(g, t, x, a));
          out << YAML::Key << "value" << YAML::Value << u << YAML::EndMap;
        }
      }
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;

  if (maps != nullptr) {
    out << YAML::Key << "compression" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "sets" << YAML::Value << YAML::BeginMap;
    for (int i = 0; i < n; ++i) {
      std::vector<LabelSet> sets(T);
      for (int t = 0; t < T; ++t) sets[t] = maps->sets[t][i];
      out << YAML::Key << g.agents[i] << YAML::Value;
      EmitPerTime(out, sets);
    }
    out << YAML::EndMap;
    out << YAML::Key << "phi" << YAML::Value << YAML::BeginMap;
    for (int i = 0; i < n; ++i) {
      out << YAML::Key << g.agents[i] << YAML::Value << YAML::BeginSeq;
      for (int t = 0; t < T; ++t) {
        const int64_t size = PhiDomainSize(g, *maps, t, i);
        const int ny = g.NumPrivateObs(t, i);
        const int nz = g.NumCommonObs(t);
        for (int64_t k = 0; k < size; ++k) {
          std::vector<std::string> labels;
          if (t == 0) {
            labels = {g.private_obs[0][i][k / nz], g.common_obs[0][k % nz]};
          } else {
            const int na = g.NumActions(t - 1, i);
            labels = {maps->sets[t - 1][i][k / na / nz / ny],
                      g.private_obs[t][i][(k / na / nz) % ny],
                      g.common_obs[t][(k / na) % nz],
                      g.actions[t - 1][i][k % na]};
          }
          out << YAML::Flow << YAML::BeginMap << YAML::Key << "t"
              << YAML::Value << t + 1;
          EmitGiven(out, labels);
          out << YAML::Key << "value" << YAML::Value
              << maps->sets[t][i][maps->phi[t][i][k]] << YAML::EndMap;
        }
      }
      out << YAML::EndSeq;
    }
    out << YAML::EndMap;
    // zeta only when it is not the composition of phi.
    if (!maps->zeta.empty() && maps->zeta != ZetaFromPhi(g, *maps)) {
      const HistorySpace space(g);
      out << YAML::Key << "zeta" << YAML::Value << YAML::BeginMap;
      for (int i = 0; i < n; ++i) {
        out << YAML::Key << g.agents[i] << YAML::Value << YAML::BeginSeq;
        for (int t = 0; t < T; ++t) {
          const int64_t np = space.PrivateCount(t, i);
          const int64_t nc = space.CommonCount(t);
          for (int64_t p = 0; p < np; ++p) {
            for (int64_t c = 0; c < nc; ++c) {
              out << YAML::Flow << YAML::BeginMap << YAML::Key << "t"
                  << YAML::Value << t + 1;
              EmitGiven(out,
                        {space.PrivateLabel(t, i, p), space.CommonLabel(t, c)});
              out << YAML::Key << "value" << YAML::Value
                  << maps->sets[t][i][maps->zeta[t][i][p * nc + c]]
                  << YAML::EndMap;
            }
          }
        }
        out << YAML::EndSeq;
      }
      out << YAML::EndMap;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace sibeq
