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

#include "sibeq/compression.h"

#include <set>
#include <string>

#include "sibeq/errors.h"

namespace sibeq {

JointIndex CompressionMaps::TypeIndex(int t) const {
  std::vector<int> radices;
  for (const auto& set : sets[t]) radices.push_back(static_cast<int>(set.size()));
  return JointIndex(std::move(radices));
}

JointIndex CompressionMaps::OtherTypeIndex(int t, int i) const {
  std::vector<int> radices;
  for (int j = 0; j < static_cast<int>(sets[t].size()); ++j) {
    if (j != i) radices.push_back(static_cast<int>(sets[t][j].size()));
  }
  return JointIndex(std::move(radices));
}

int64_t PhiDomainSize(const FiniteGame& game, const CompressionMaps& maps,
                      int t, int i) {
  if (t == 0) {
    return static_cast<int64_t>(game.NumPrivateObs(0, i)) *
           game.NumCommonObs(0);
  }
  return static_cast<int64_t>(maps.NumTypes(t - 1, i)) *
         game.NumPrivateObs(t, i) * game.NumCommonObs(t) *
         game.NumActions(t - 1, i);
}

CompressionMaps IdentityCompression(const FiniteGame& game, int64_t cap) {
  const HistorySpace space(game);
  const int T = game.horizon;
  const int n = game.num_agents();
  CompressionMaps maps;
  maps.sets.assign(T, std::vector<LabelSet>(n));
  maps.phi.assign(T, std::vector<std::vector<int>>(n));
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < n; ++i) {
      const int64_t np = space.PrivateCount(t, i, cap);
      auto& set = maps.sets[t][i];
      set.reserve(np);
      for (int64_t p = 0; p < np; ++p) {
        set.push_back(space.PrivateLabel(t, i, p));
      }
      auto& phi = maps.phi[t][i];
      phi.resize(PhiDomainSize(game, maps, t, i));
      if (t == 0) {
        for (int y = 0; y < game.NumPrivateObs(0, i); ++y) {
          for (int z = 0; z < game.NumCommonObs(0); ++z) {
            phi[y * game.NumCommonObs(0) + z] = y;
          }
        }
        continue;
      }
      const int ny = game.NumPrivateObs(t, i);
      const int nz = game.NumCommonObs(t);
      const int na = game.NumActions(t - 1, i);
      for (int s = 0; s < maps.NumTypes(t - 1, i); ++s) {
        for (int y = 0; y < ny; ++y) {
          for (int z = 0; z < nz; ++z) {
            for (int a = 0; a < na; ++a) {
              phi[((s * ny + y) * nz + z) * na + a] =
                  static_cast<int>(space.ExtendPrivate(t - 1, i, s, a, y));
            }
          }
        }
      }
    }
  }
  DeriveZetaFromPhi(game, &maps, cap);
  return maps;
}

std::vector<std::vector<std::vector<int>>> ZetaFromPhi(
    const FiniteGame& game, const CompressionMaps& maps, int64_t cap) {
  const HistorySpace space(game);
  const int T = game.horizon;
  const int n = game.num_agents();
  std::vector<std::vector<std::vector<int>>> zeta(
      T, std::vector<std::vector<int>>(n));
  for (int t = 0; t < T; ++t) {
    const int64_t nc = space.CommonCount(t, cap);
    for (int i = 0; i < n; ++i) {
      const int64_t np = space.PrivateCount(t, i, cap);
      if (static_cast<double>(np) * nc > static_cast<double>(cap)) {
        throw ExplosionError("zeta table", static_cast<double>(np) * nc);
      }
      auto& table = zeta[t][i];
      table.resize(np * nc);
      for (int64_t p = 0; p < np; ++p) {
        for (int64_t c = 0; c < nc; ++c) {
          const int y = space.LastPrivateObs(t, i, p);
          const int z = space.LastCommonObs(t, c);
          if (t == 0) {
            table[p * nc + c] = maps.Phi0(game, i, y, z);
            continue;
          }
          const int64_t pp = space.PrivatePrefix(t, i, p);
          const int64_t cp = space.CommonPrefix(t, c);
          const int a = space.LastAction(t, i, p);
          const int64_t ncp = space.CommonCount(t - 1, cap);
          const int s_prev = zeta[t - 1][i][pp * ncp + cp];
          table[p * nc + c] = maps.Phi(game, t, i, s_prev, y, z, a);
        }
      }
    }
  }
  return zeta;
}

void DeriveZetaFromPhi(const FiniteGame& game, CompressionMaps* maps,
                       int64_t cap) {
  maps->zeta = ZetaFromPhi(game, *maps, cap);
}

void ValidateCompression(const FiniteGame& game, const CompressionMaps& maps) {
  const int T = game.horizon;
  const int n = game.num_agents();
  if (static_cast<int>(maps.sets.size()) != T ||
      static_cast<int>(maps.phi.size()) != T) {
    throw ShapeMismatch("compression needs one entry per period");
  }
  const HistorySpace space(game);
  for (int t = 0; t < T; ++t) {
    if (static_cast<int>(maps.sets[t].size()) != n ||
        static_cast<int>(maps.phi[t].size()) != n) {
      throw ShapeMismatch("compression needs one entry per agent");
    }
    for (int i = 0; i < n; ++i) {
      const std::string where =
          " of " + game.agents[i] + " at t=" + std::to_string(t + 1);
      if (maps.sets[t][i].empty()) {
        throw EmptySetError("compressed set" + where + " is empty");
      }
      std::set<std::string> seen(maps.sets[t][i].begin(),
                                 maps.sets[t][i].end());
      if (seen.size() != maps.sets[t][i].size()) {
        throw ShapeMismatch("compressed set" + where + " repeats a label");
      }
      if (static_cast<int64_t>(maps.phi[t][i].size()) !=
          PhiDomainSize(game, maps, t, i)) {
        throw ShapeMismatch("phi table" + where + " has wrong size");
      }
      for (int s : maps.phi[t][i]) {
        if (s < 0 || s >= maps.NumTypes(t, i)) {
          throw IndexOutOfRange("phi" + where + " maps outside its set");
        }
      }
    }
  }
  if (maps.zeta.empty()) return;
  if (static_cast<int>(maps.zeta.size()) != T) {
    throw ShapeMismatch("zeta needs one entry per period");
  }
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < n; ++i) {
      const double expect = space.NumPrivate(t, i) * space.NumCommon(t);
      if (static_cast<double>(maps.zeta[t][i].size()) != expect) {
        throw ShapeMismatch("zeta table of " + game.agents[i] + " at t=" +
                            std::to_string(t + 1) + " has wrong size");
      }
      for (int s : maps.zeta[t][i]) {
        if (s < 0 || s >= maps.NumTypes(t, i)) {
          throw IndexOutOfRange("zeta maps outside its set");
        }
      }
    }
  }
}

}  // namespace sibeq
