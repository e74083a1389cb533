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

#include "locemb/mob/filter.h"

#include <map>
#include <set>
#include <string>
#include <unordered_map>

#include "locemb/mob/time.h"

namespace locemb::mob {

std::vector<VisitRecord> filter_min_counts(std::span<const VisitRecord> records,
                                           std::size_t min_location_visits,
                                           std::size_t min_user_records) {
  std::vector<VisitRecord> current(records.begin(), records.end());
  while (true) {
    const std::size_t before = current.size();
    std::unordered_map<std::string, std::size_t> loc_counts;
    for (const auto& r : current) ++loc_counts[r.location];
    std::erase_if(current, [&](const VisitRecord& r) {
      return loc_counts[r.location] < min_location_visits;
    });
    std::unordered_map<std::string, std::size_t> user_counts;
    for (const auto& r : current) ++user_counts[r.user];
    std::erase_if(current, [&](const VisitRecord& r) {
      return user_counts[r.user] < min_user_records;
    });
    if (current.size() == before) break;
  }
  if (current.empty()) {
    throw EmptyDatasetError(
        "filter_min_counts: no records left after requiring " +
        std::to_string(min_location_visits) + " visits per location and " +
        std::to_string(min_user_records) + " records per user");
  }
  return current;
}

std::vector<VisitRecord> filter_min_tracking_days(
    std::span<const VisitRecord> records, std::size_t min_days) {
  std::map<std::string, std::set<std::int64_t>> days;
  for (const auto& r : records) days[r.user].insert(utc_day(r.time));
  std::vector<VisitRecord> out;
  for (const auto& r : records) {
    if (days[r.user].size() >= min_days) out.push_back(r);
  }
  if (out.empty()) {
    throw EmptyDatasetError("filter_min_tracking_days: no user tracked for " +
                            std::to_string(min_days) + " days");
  }
  return out;
}

}  // namespace locemb::mob
