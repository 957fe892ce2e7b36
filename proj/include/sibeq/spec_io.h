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

#ifndef SIBEQ_SPEC_IO_H_
#define SIBEQ_SPEC_IO_H_

#include <string>

#include "sibeq/compression.h"
#include "sibeq/game.h"

namespace sibeq {

struct GameSpec {
  FiniteGame game;
  CompressionMaps maps;
  // False when the file has no compression section and maps is the
  // identity compression.
  bool explicit_compression = false;
};

// Parses the YAML game format described in the README. Only syntax and
// structure are checked, and every failure is a ParseError carrying the
// position. Kernels and compression maps are returned as written.
GameSpec ParseSpec(const std::string& text);
GameSpec ParseSpecFile(const std::string& path);

// Semantic checks: ValidateGame (row sums, signs, shapes; renormalizes rows
// within tolerance) followed by ValidateCompression. Raises their errors.
void ValidateSpec(GameSpec* spec);

// ParseSpecFile followed by ValidateSpec.
GameSpec LoadSpec(const std::string& path);

// Fully explicit rendering of a model. ParseSpec(SerializeSpec(g, m))
// reproduces g and m exactly. maps may be null to omit the compression.
std::string SerializeSpec(const FiniteGame& game, const CompressionMaps* maps);

}  // namespace sibeq

#endif  // SIBEQ_SPEC_IO_H_
