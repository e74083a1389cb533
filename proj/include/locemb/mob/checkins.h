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
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "locemb/mob/location_index.h"

namespace locemb::mob {

struct CheckinData {
  std::vector<VisitRecord> records;
  LocationIndex index;
};

// Check-in file: comma-separated `user,location,x,y,timestamp[,description]`
// with an optional header row starting with "user". Records come back
// sorted by (user, time), ties kept in file order. Malformed rows throw
// ParseError naming the line.
CheckinData load_checkins(const std::filesystem::path& path);
CheckinData parse_checkins(std::istream& in, const std::string& source);

void write_checkins(const std::filesystem::path& path,
                    std::span<const VisitRecord> records,
                    const LocationIndex& index);

// Sorts by (user, time) keeping the relative order of equal keys.
void sort_by_user_time(std::vector<VisitRecord>& records);

}  // namespace locemb::mob
