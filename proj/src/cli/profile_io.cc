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

#include "sibeq/profile_io.h"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "sibeq/errors.h"
#include "sibeq/history.h"

namespace sibeq {
namespace {

constexpr char kHeader[] = "t\tagent\tcommon_history\ttype\taction\tprob";

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, '\t')) out.push_back(field);
  if (!line.empty() && line.back() == '\t') out.push_back("");
  return out;
}

int Find(const LabelSet& set, const std::string& label, int line,
         const std::string& what) {
  for (int k = 0; k < static_cast<int>(set.size()); ++k) {
    if (set[k] == label) return k;
  }
  throw ParseError("unknown " + what + " '" + label + "'", line, 1);
}

}  // namespace

SibProfile ParseProfile(const FiniteGame& game, const CompressionMaps& maps,
                        const std::string& text) {
  const HistorySpace space(game);
  SibProfile sigma = UniformProfile(game, maps);
  for (auto& level : sigma.stages) {
    for (auto& st : level) {
      for (auto& table : st.tables) std::fill(table.begin(), table.end(), 0.0);
    }
  }
  // Common-history labels per period.
  std::vector<std::map<std::string, int64_t>> nodes(game.horizon);
  for (int t = 0; t < game.horizon; ++t) {
    for (int64_t c = 0; c < space.CommonCount(t); ++c) {
      nodes[t][space.CommonLabel(t, c)] = c;
    }
  }
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != kHeader) {
        throw ParseError("expected header '" + std::string(kHeader) + "'",
                         line_no, 1);
      }
      header = true;
      continue;
    }
    const auto f = SplitTabs(line);
    if (f.size() != 6) {
      throw ParseError("expected 6 tab-separated fields", line_no, 1);
    }
    char* end = nullptr;
    const long t1 = std::strtol(f[0].c_str(), &end, 10);
    if (f[0].empty() || *end != '\0' || t1 < 1 || t1 > game.horizon) {
      throw ParseError("bad period '" + f[0] + "'", line_no, 1);
    }
    const int t = static_cast<int>(t1 - 1);
    const int i = Find(game.agents, f[1], line_no, "agent");
    const int s = Find(maps.sets[t][i], f[3], line_no, "type");
    const int a = Find(game.actions[t][i], f[4], line_no, "action");
    const double p = std::strtod(f[5].c_str(), &end);
    if (f[5].empty() || *end != '\0') {
      throw ParseError("bad probability '" + f[5] + "'", line_no, 1);
    }
    std::vector<int64_t> targets;
    if (f[2] == "*") {
      for (int64_t c = 0; c < static_cast<int64_t>(sigma.stages[t].size());
           ++c) {
        targets.push_back(c);
      }
    } else {
      auto it = nodes[t].find(f[2]);
      if (it == nodes[t].end()) {
        throw ParseError("unknown common history '" + f[2] + "'", line_no, 1);
      }
      targets.push_back(it->second);
    }
    for (int64_t c : targets) sigma.stages[t][c].MutableProb(i, s, a) = p;
  }
  if (!header) throw ParseError("empty profile", line_no, 0);
  ValidateProfile(game, maps, sigma);
  return sigma;
}

SibProfile ParseProfileFile(const FiniteGame& game,
                            const CompressionMaps& maps,
                            const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'", 0, 0);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseProfile(game, maps, buffer.str());
}

std::string SerializeProfile(const FiniteGame& game,
                             const CompressionMaps& maps,
                             const SibProfile& profile) {
  const HistorySpace space(game);
  std::ostringstream out;
  out.precision(17);
  out << kHeader << "\n";
  for (int t = 0; t < game.horizon; ++t) {
    for (int64_t c = 0; c < static_cast<int64_t>(profile.stages[t].size());
         ++c) {
      const StageStrategy& st = profile.stages[t][c];
      for (int i = 0; i < game.num_agents(); ++i) {
        for (int s = 0; s < maps.NumTypes(t, i); ++s) {
          for (int a = 0; a < game.NumActions(t, i); ++a) {
            out << t + 1 << "\t" << game.agents[i] << "\t"
                << space.CommonLabel(t, c) << "\t" << maps.sets[t][i][s]
                << "\t" << game.actions[t][i][a] << "\t" << st.Prob(i, s, a)
                << "\n";
          }
        }
      }
    }
  }
  return out.str();
}

}  // namespace sibeq
