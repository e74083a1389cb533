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

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "locemb/mob/types.h"

namespace locemb::mob {

enum class SplitMode { kConventional, kInductive };

std::string to_string(SplitMode mode);
SplitMode parse_split_mode(const std::string& text);

struct SplitRatios {
  double train = 0.6;
  double validation = 0.2;
  double test = 0.2;

  friend bool operator==(const SplitRatios&, const SplitRatios&) = default;
};

// First and last UTC day (inclusive) on which a user has a record.
struct TrackingPeriod {
  std::int64_t first_day = 0;
  std::int64_t last_day = 0;
  std::int64_t days() const { return last_day - first_day + 1; }
};
using TrackingPeriods = std::map<std::string, TrackingPeriod>;

TrackingPeriods tracking_periods(std::span<const VisitRecord> records);

struct DatasetSplit {
  SplitMode mode = SplitMode::kConventional;
  std::vector<MobilitySequence> train;
  std::vector<MobilitySequence> validation;
  std::vector<MobilitySequence> test;
  // Held-out locations; empty in conventional mode.
  std::set<std::string> new_locations;
  std::uint64_t seed = 0;
  double fraction = 0.0;
};

// Assigns each sequence by the day of its target within its user's
// tracking period: with D tracked days and target day d (0-based), the
// sequence goes to train when d < train*D, to validation when
// d < (train+validation)*D, and to test otherwise. A target on a boundary
// day therefore belongs to the later split. Throws std::invalid_argument
// for negative ratios, a zero train ratio, or ratios not summing to 1, and
// when a sequence's user has no tracking period.
DatasetSplit split_conventional(std::span<const MobilitySequence> sequences,
                                const TrackingPeriods& periods,
                                const SplitRatios& ratios = {});

// Samples round(fraction * |train locations|) locations (halves round down)
// uniformly without replacement from the locations occurring in the
// conventional train set, then removes every train and validation sequence
// that touches one of them in its context or target. Test is copied
// unchanged. Throws std::invalid_argument unless 0 < fraction < 1 and conv
// is conventional.
DatasetSplit split_inductive(const DatasetSplit& conv, double fraction,
                             std::uint64_t seed);

// Number of locations held out for a train set with n locations.
std::size_t held_out_count(std::size_t n, double fraction);

}  // namespace locemb::mob
