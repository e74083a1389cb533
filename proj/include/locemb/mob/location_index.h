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

#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "locemb/mob/types.h"

namespace locemb::mob {

// Ordered set of locations with a bijective id <-> class-index mapping.
// Locations are kept in ascending id order, so the mapping depends only on
// the set of locations and never on input order.
class LocationIndex {
 public:
  LocationIndex() = default;
  // Merges entries sharing an id when their centroids agree (keeping the
  // first non-empty description) and throws std::invalid_argument when they
  // disagree.
  explicit LocationIndex(std::vector<Location> locations);

  std::size_t size() const noexcept { return locations_.size(); }
  bool empty() const noexcept { return locations_.empty(); }
  const Location& at(std::size_t index) const { return locations_.at(index); }
  const std::vector<Location>& locations() const noexcept {
    return locations_;
  }

  bool contains(const std::string& id) const { return by_id_.contains(id); }
  std::optional<std::size_t> find(const std::string& id) const;
  // Throws std::out_of_range naming the id when unknown.
  std::size_t index_of(const std::string& id) const;
  const Location& location(const std::string& id) const {
    return locations_[index_of(id)];
  }

  // The sub-index holding only the given ids (unknown ids are ignored).
  LocationIndex restrict_to(const std::set<std::string>& ids) const;

  // SHA-256 over the ordered (id, centroid) list.
  std::string fingerprint() const;

 private:
  std::vector<Location> locations_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

}  // namespace locemb::mob
