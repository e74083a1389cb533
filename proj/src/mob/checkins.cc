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

#include "locemb/mob/checkins.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "locemb/mob/csv.h"
#include "locemb/mob/time.h"

namespace locemb::mob {

void sort_by_user_time(std::vector<VisitRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const VisitRecord& a, const VisitRecord& b) {
                     if (a.user != b.user) return a.user < b.user;
                     return a.time < b.time;
                   });
}

CheckinData parse_checkins(std::istream& in, const std::string& source) {
  CheckinData data;
  std::unordered_map<std::string, Location> seen;
  std::vector<Location> locations;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields;
    try {
      fields = split_csv_line(line);
    } catch (const std::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
    if (line_no == 1 && !fields.empty() && fields[0] == "user") continue;
    if (fields.size() < 5 || fields.size() > 6) {
      throw ParseError(source, line_no,
                       "expected 5 or 6 fields "
                       "(user,location,x,y,timestamp[,description]), got " +
                           std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw ParseError(source, line_no, "empty user or location id");
    }
    Location loc;
    loc.id = fields[1];
    VisitRecord rec{fields[0], fields[1], 0};
    try {
      if (fields[2].empty() || fields[3].empty()) {
        throw std::invalid_argument("missing coordinate");
      }
      loc.centroid = {parse_double(fields[2]), parse_double(fields[3])};
      rec.time = parse_timestamp(fields[4]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, line_no, e.what());
    }
    if (fields.size() == 6) loc.description = fields[5];
    auto [it, inserted] = seen.try_emplace(loc.id, loc);
    if (!inserted) {
      if (!(it->second.centroid == loc.centroid)) {
        throw ParseError(source, line_no,
                         "location '" + loc.id +
                             "' repeated with different coordinates");
      }
      if (it->second.description.empty() && !loc.description.empty()) {
        it->second.description = loc.description;
      }
    }
    data.records.push_back(std::move(rec));
  }
  for (auto& [id, loc] : seen) locations.push_back(std::move(loc));
  data.index = LocationIndex(std::move(locations));
  sort_by_user_time(data.records);
  return data;
}

CheckinData load_checkins(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_checkins: cannot open " + path.string());
  }
  return parse_checkins(in, path.string());
}

void write_checkins(const std::filesystem::path& path,
                    std::span<const VisitRecord> records,
                    const LocationIndex& index) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("write_checkins: cannot open " + path.string());
  }
  out << "user,location,x,y,timestamp,description\n";
  char num[64];
  for (const auto& r : records) {
    const Location& loc = index.location(r.location);
    std::snprintf(num, sizeof(num), ",%.17g,%.17g,", loc.centroid.x,
                  loc.centroid.y);
    out << csv_field(r.user) << ',' << csv_field(r.location) << num << r.time
        << ',' << csv_field(loc.description) << '\n';
  }
}

}  // namespace locemb::mob
