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

#ifndef SIBEQ_CLI_H_
#define SIBEQ_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace sibeq {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
// A legitimate negative outcome: no fixed point, not certified, or a
// compression that fails verification.
inline constexpr int kExitNegative = 2;

// Runs the tool; args excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// Class name of a library error, for messages such as "RowSumError: ...".
std::string ErrorName(const std::exception& e);

}  // namespace sibeq

#endif  // SIBEQ_CLI_H_
