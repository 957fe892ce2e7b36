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

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "sibeq/alice_bob.h"
#include "sibeq/compression.h"
#include "sibeq/errors.h"
#include "sibeq/profile.h"
#include "sibeq/profile_io.h"
#include "sibeq/random_games.h"
#include "sibeq/spec_io.h"

namespace sibeq {
namespace {

std::string DataPath(const std::string& name) {
  return std::string(SIBEQ_DATA_DIR) + "/" + name;
}

std::string ReadFile(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

TEST(ParseSpecTest, BundledSignalingGameIsTheModel) {
  const GameSpec spec = LoadSpec(DataPath("alice_bob.game"));
  const FiniteGame want = MakeAliceBobGame(25);
  EXPECT_EQ(spec.game, want);
  EXPECT_TRUE(spec.explicit_compression);
  EXPECT_EQ(spec.maps, AliceBobCompression(want));
}

TEST(ParseSpecTest, EmptyInputRaisesParseError) {
  EXPECT_THROW(ParseSpec(""), ParseError);
  EXPECT_THROW(ParseSpec("# only a comment\n"), ParseError);
}

TEST(ParseSpecTest, MissingFileRaises) {
  EXPECT_THROW(ParseSpecFile("/nonexistent/game.yaml"), ParseError);
}

TEST(ParseSpecTest, SyntaxErrorsCarryPositions) {
  try {
    ParseSpec("horizon: 2\nagents: [a, b\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_GT(e.line(), 0);
  }
}

TEST(ParseSpecTest, UnknownLabelIsReportedWithItsLine) {
  std::string text = ReadFile(DataPath("alice_bob.game"));
  const std::string from = "next: {\"-1\": 1}";
  text.replace(text.find(from), from.size(), "next: {\"7\": 1}");
  try {
    ParseSpec(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_GT(e.line(), 0);
    EXPECT_NE(std::string(e.what()).find("7"), std::string::npos);
  }
}

// Kernels are parsed as written; row sums are a validation concern.
TEST(ParseSpecTest, BrokenKernelFailsValidation) {
  std::string text = ReadFile(DataPath("alice_bob.game"));
  const std::string from = "{\"1\": 0.8, \"-1\": 0.2}";
  text.replace(text.find(from), from.size(), "{\"1\": 0.7, \"-1\": 0.2}");
  GameSpec spec = ParseSpec(text);
  EXPECT_THROW(ValidateSpec(&spec), RowSumError);
}

TEST(ParseSpecTest, ValidationKeepsValidModels) {
  GameSpec spec = ParseSpecFile(DataPath("xor.game"));
  const GameSpec before = spec;
  ValidateSpec(&spec);
  EXPECT_EQ(spec.game, before.game);
  EXPECT_EQ(spec.maps, before.maps);
}

TEST(ParseSpecTest, UnusedRowIsAnError) {
  std::string text = ReadFile(DataPath("alice_bob.game"));
  text += "\nextra: 1\n";
  EXPECT_NO_THROW(ParseSpec(text));
  const std::string row = "  - {given: [\"1\", \"1\", none], next: {\"1\": 1}}";
  text.insert(text.find(row) + row.size(),
              "\n  - {given: [\"1\", \"1\", none], next: {\"-1\": 1}}");
  EXPECT_THROW(ParseSpec(text), ParseError);
}

TEST(ParseSpecTest, FractionsAndWildcards) {
  const std::string text = R"(
horizon: 1
agents: [solo]
states: [a, b, c]
actions:
  solo: [x, y]
initial: {a: 1/3, b: 1/3, c: 1/3}
utility:
  solo:
    - {given: [a, x], value: 1}
    - {given: ["*", y], value: 1/2}
)";
  const GameSpec spec = ParseSpec(text);
  EXPECT_DOUBLE_EQ(spec.game.initial[0], 1.0 / 3.0);
  EXPECT_EQ(spec.game.Utility(0, 0, 0, 0), 1.0);
  EXPECT_EQ(spec.game.Utility(0, 0, 1, 0), 0.0);
  EXPECT_EQ(spec.game.Utility(0, 0, 2, 1), 0.5);
  EXPECT_FALSE(spec.explicit_compression);
  EXPECT_EQ(spec.maps, IdentityCompression(spec.game));
}

TEST(SerializeSpecTest, RoundTripsRandomGames) {
  Rng rng(101);
  for (int k = 0; k < 10; ++k) {
    RandomGameOptions opts;
    opts.horizon = 1 + k % 3;
    opts.agents = 1 + k % 3;
    const FiniteGame g = RandomGame(rng, opts);
    const CompressionMaps m = IdentityCompression(g);
    const std::string text = SerializeSpec(g, &m);
    const GameSpec back = ParseSpec(text);
    EXPECT_EQ(back.game, g);
    EXPECT_EQ(back.maps, m);
    EXPECT_EQ(SerializeSpec(back.game, &back.maps), text);
  }
}

TEST(SerializeSpecTest, RoundTripsBundledFiles) {
  for (const char* name : {"alice_bob.game", "xor.game"}) {
    const GameSpec spec = ParseSpecFile(DataPath(name));
    const GameSpec back = ParseSpec(SerializeSpec(spec.game, &spec.maps));
    EXPECT_EQ(back.game, spec.game) << name;
    EXPECT_EQ(back.maps, spec.maps) << name;
  }
}

TEST(SerializeSpecTest, KeepsExplicitZeta) {
  const FiniteGame g = MakeAliceBobGame(25);
  CompressionMaps m = AliceBobCompression(g);
  // A zeta that disagrees with phi must survive the round trip as written.
  m.zeta[1][0][0] = 1 - m.zeta[1][0][0];
  const GameSpec back = ParseSpec(SerializeSpec(g, &m));
  EXPECT_EQ(back.maps.zeta, m.zeta);
}

// Every prefix of a valid file either parses or raises ParseError, and a
// prefix that parses is then either valid or rejected by validation.
TEST(FuzzTest, TruncationsOnlyRaiseParseErrors) {
  for (const char* name : {"alice_bob.game", "xor.game"}) {
    const std::string text = ReadFile(DataPath(name));
    int parse_errors = 0;
    for (size_t n = 0; n < text.size(); ++n) {
      GameSpec spec;
      try {
        spec = ParseSpec(text.substr(0, n));
      } catch (const ParseError&) {
        ++parse_errors;
        continue;
      } catch (...) {
        ADD_FAILURE() << name << " prefix " << n << " raised a non-parse error";
        continue;
      }
      try {
        ValidateSpec(&spec);
      } catch (const Error&) {
      } catch (...) {
        ADD_FAILURE() << name << " prefix " << n << " broke validation";
      }
    }
    EXPECT_GT(parse_errors, 0);
  }
}

TEST(FuzzTest, RandomByteFlipsOnlyRaiseParseErrors) {
  const std::string text = ReadFile(DataPath("alice_bob.game"));
  Rng rng(102);
  const std::string alphabet = "{}[]:,-\"' \n01a*/#";
  for (int k = 0; k < 500; ++k) {
    std::string t = text;
    for (int e = 0; e < 3; ++e) {
      t[UniformInt(rng, static_cast<int>(t.size()))] =
          alphabet[UniformInt(rng, static_cast<int>(alphabet.size()))];
    }
    GameSpec spec;
    try {
      spec = ParseSpec(t);
    } catch (const ParseError&) {
      continue;
    } catch (...) {
      ADD_FAILURE() << "non-parse error for mutation " << k;
      continue;
    }
    try {
      ValidateSpec(&spec);
    } catch (const Error&) {
    } catch (...) {
      ADD_FAILURE() << "foreign validation error for mutation " << k;
    }
  }
}

TEST(ProfileIoTest, RoundTrip) {
  Rng rng(103);
  RandomGameOptions opts;
  opts.horizon = 2;
  const FiniteGame g = RandomGame(rng, opts);
  const CompressionMaps m = IdentityCompression(g);
  const SibProfile sigma = RandomProfile(g, m, rng);
  const std::string text = SerializeProfile(g, m, sigma);
  EXPECT_EQ(ParseProfile(g, m, text), sigma);
}

TEST(ProfileIoTest, WildcardsAndComments) {
  const FiniteGame g = MakeAliceBobGame(25);
  const CompressionMaps m = AliceBobCompression(g);
  const std::string text =
      "t\tagent\tcommon_history\ttype\taction\tprob\n"
      "# Alice always plays 1\n"
      "1\talice\tnone\t-1\t1\t1\n"
      "1\talice\tnone\t1\t1\t1\n"
      "1\tbob\tnone\tnone\tnone\t1\n"
      "2\talice\t*\t-1\tnone\t1\n"
      "2\talice\t*\t1\tnone\t1\n"
      "2\tbob\t*\tnone\t-1\t1\n"
      "2\tbob\tnone,-1\tnone\t-1\t0\n"
      "2\tbob\tnone,-1\tnone\t1\t1\n";
  const SibProfile sigma = ParseProfile(g, m, text);
  EXPECT_EQ(sigma, AliceBobProfile(g, m, {0.0, 1.0}));
}

TEST(ProfileIoTest, RejectsBadRows) {
  const FiniteGame g = MakeAliceBobGame(25);
  const CompressionMaps m = AliceBobCompression(g);
  const std::string header = "t\tagent\tcommon_history\ttype\taction\tprob\n";
  EXPECT_THROW(ParseProfile(g, m, header + "1\tcarol\tnone\t-1\t1\t1\n"),
               ParseError);
  EXPECT_THROW(ParseProfile(g, m, header + "1\talice\tnone\t-1\t1\n"),
               ParseError);
  // Rows that do not form distributions fail validation.
  EXPECT_THROW(ParseProfile(g, m, header + "1\talice\tnone\t-1\t1\t0.5\n"),
               Error);
}

}  // namespace
}  // namespace sibeq
