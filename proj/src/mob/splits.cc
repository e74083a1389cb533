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

#include "locemb/mob/splits.h"

#include <cmath>
#include <stdexcept>

#include "locemb/mob/sequences.h"
#include "locemb/mob/time.h"
#include "locemb/num/rng.h"

namespace locemb::mob {

std::string to_string(SplitMode mode) {
  return mode == SplitMode::kConventional ? "conventional" : "inductive";
}

SplitMode parse_split_mode(const std::string& text) {
  if (text == "conventional") return SplitMode::kConventional;
  if (text == "inductive") return SplitMode::kInductive;
  throw std::invalid_argument("unknown split mode '" + text + "'");
}

TrackingPeriods tracking_periods(std::span<const VisitRecord> records) {
  TrackingPeriods out;
  for (const auto& r : records) {
    const std::int64_t d = utc_day(r.time);
    auto [it, inserted] = out.try_emplace(r.user, TrackingPeriod{d, d});
    if (!inserted) {
      it->second.first_day = std::min(it->second.first_day, d);
      it->second.last_day = std::max(it->second.last_day, d);
    }
  }
  return out;
}

DatasetSplit split_conventional(std::span<const MobilitySequence> sequences,
                                const TrackingPeriods& periods,
                                const SplitRatios& ratios) {
  const double total = ratios.train + ratios.validation + ratios.test;
  if (ratios.train <= 0.0 || ratios.validation < 0.0 || ratios.test < 0.0 ||
      std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument(
        "split_conventional: ratios must be non-negative, have a positive "
        "train share and sum to 1");
  }
  // Tolerance absorbs representation error in products like 0.6 * 10.
  constexpr double kEps = 1e-9;
  DatasetSplit split;
  split.mode = SplitMode::kConventional;
  for (const auto& seq : sequences) {
    auto it = periods.find(seq.user);
    if (it == periods.end()) {
      throw std::invalid_argument("split_conventional: no tracking period for "
                                  "user '" + seq.user + "'");
    }
    const auto days = static_cast<double>(it->second.days());
    const auto d =
        static_cast<double>(utc_day(seq.target.time) - it->second.first_day);
    if (d < ratios.train * days - kEps) {
      split.train.push_back(seq);
    } else if (d < (ratios.train + ratios.validation) * days - kEps) {
      split.validation.push_back(seq);
    } else {
      split.test.push_back(seq);
    }
  }
  return split;
}

std::size_t held_out_count(std::size_t n, double fraction) {
  return static_cast<std::size_t>(
      std::ceil(static_cast<double>(n) * fraction - 0.5));
}

DatasetSplit split_inductive(const DatasetSplit& conv, double fraction,
                             std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument(
        "split_inductive: fraction must lie in (0, 1), got " +
        std::to_string(fraction));
  }
  if (conv.mode != SplitMode::kConventional) {
    throw std::invalid_argument(
        "split_inductive: input must be a conventional split");
  }
  const auto train_locations = locations_in(conv.train);
  std::vector<std::string> pool(train_locations.begin(), train_locations.end());
  num::Rng rng(seed);
  rng.shuffle(std::span<std::string>(pool));
  const std::size_t k = held_out_count(pool.size(), fraction);

  DatasetSplit out;
  out.mode = SplitMode::kInductive;
  out.seed = seed;
  out.fraction = fraction;
  out.new_locations.insert(pool.begin(), pool.begin() + static_cast<long>(k));
  for (const auto& s : conv.train) {
    if (!touches_any(s, out.new_locations)) out.train.push_back(s);
  }
  for (const auto& s : conv.validation) {
    if (!touches_any(s, out.new_locations)) out.validation.push_back(s);
  }
  out.test = conv.test;
  return out;
}

}  // namespace locemb::mob
