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

#include "locemb/mob/location_index.h"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "locemb/mob/hash.h"

namespace locemb::mob {

LocationIndex::LocationIndex(std::vector<Location> locations) {
  std::stable_sort(locations.begin(), locations.end(),
                   [](const Location& a, const Location& b) {
                     return a.id < b.id;
                   });
  for (auto& loc : locations) {
    if (!locations_.empty() && locations_.back().id == loc.id) {
      Location& kept = locations_.back();
      if (!(kept.centroid == loc.centroid)) {
        throw std::invalid_argument("LocationIndex: location '" + loc.id +
                                    "' appears with different coordinates");
      }
      if (kept.description.empty()) kept.description = loc.description;
      continue;
    }
    locations_.push_back(std::move(loc));
  }
  by_id_.reserve(locations_.size());
  for (std::size_t i = 0; i < locations_.size(); ++i) {
    by_id_.emplace(locations_[i].id, i);
  }
}

std::optional<std::size_t> LocationIndex::find(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::size_t LocationIndex::index_of(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) {
    throw std::out_of_range("LocationIndex: unknown location '" + id + "'");
  }
  return it->second;
}

LocationIndex LocationIndex::restrict_to(
    const std::set<std::string>& ids) const {
  std::vector<Location> kept;
  for (const auto& loc : locations_) {
    if (ids.contains(loc.id)) kept.push_back(loc);
  }
  return LocationIndex(std::move(kept));
}

std::string LocationIndex::fingerprint() const {
  std::string buf;
  char num[64];
  for (const auto& loc : locations_) {
    buf += loc.id;
    std::snprintf(num, sizeof(num), "\t%.17g\t%.17g\n", loc.centroid.x,
                  loc.centroid.y);
    buf += num;
  }
  return sha256_hex(buf);
}

}  // namespace locemb::mob
