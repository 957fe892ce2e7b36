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

#ifndef SIBEQ_PROFILE_IO_H_
#define SIBEQ_PROFILE_IO_H_

#include <string>

#include "sibeq/compression.h"
#include "sibeq/game.h"
#include "sibeq/profile.h"

namespace sibeq {

// Tab-separated profile rows with header
//   t  agent  common_history  type  action  prob
// where t is 1-based and common_history is a comma-separated list of common
// observation labels ("*" matches every node). Later rows override earlier
// ones; unlisted entries are zero.
SibProfile ParseProfile(const FiniteGame& game, const CompressionMaps& maps,
                        const std::string& text);
SibProfile ParseProfileFile(const FiniteGame& game,
                            const CompressionMaps& maps,
                            const std::string& path);

// Every entry of the profile in the same format, with 17 significant digits.
std::string SerializeProfile(const FiniteGame& game,
                             const CompressionMaps& maps,
                             const SibProfile& profile);

}  // namespace sibeq

#endif  // SIBEQ_PROFILE_IO_H_
