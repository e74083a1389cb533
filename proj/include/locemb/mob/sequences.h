// Copyright 2026 The locemb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "locemb/mob/time.h"
#include "locemb/mob/types.h"

namespace locemb::mob {

struct SequenceOptions {
  std::int64_t window_seconds = 7 * kSecondsPerDay;
  std::size_t min_context = 3;
};

// One candidate sequence per visit: the context is the same user's visits
// with time in [t - window, t). Candidates with fewer than min_context
// context visits are discarded. Records are grouped by user and time sorted
// internally; ids are assigned consecutively in (user, time) order.
std::vector<MobilitySequence> build_sequences(
    std::span<const VisitRecord> records, const SequenceOptions& options = {});

// Every location id appearing in a context or target.
std::set<std::string> locations_in(std::span<const MobilitySequence> sequences);
bool touches_any(const MobilitySequence& seq,
                 const std::set<std::string>& locations);

// JSON-lines serialisation, one sequence per line.
std::string sequences_to_jsonl(std::span<const MobilitySequence> sequences);
void write_sequences(const std::filesystem::path& path,
                     std::span<const MobilitySequence> sequences);
std::vector<MobilitySequence> read_sequences(const std::filesystem::path& path);

}  // namespace locemb::mob
