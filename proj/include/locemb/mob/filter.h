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

#include <span>
#include <stdexcept>
#include <vector>

#include "locemb/mob/types.h"

namespace locemb::mob {

class EmptyDatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Drops locations with fewer than min_location_visits visits, then users
// with fewer than min_user_records records, repeating until neither rule
// removes anything. Order of surviving records is preserved. Throws
// EmptyDatasetError when nothing survives.
std::vector<VisitRecord> filter_min_counts(std::span<const VisitRecord> records,
                                           std::size_t min_location_visits = 10,
                                           std::size_t min_user_records = 10);

// Drops users whose records cover fewer than min_days distinct UTC days.
std::vector<VisitRecord> filter_min_tracking_days(
    std::span<const VisitRecord> records, std::size_t min_days);

}  // namespace locemb::mob
