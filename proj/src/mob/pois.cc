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

#include "locemb/mob/pois.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "locemb/mob/csv.h"

namespace locemb::mob {

std::vector<PoiRecord> parse_pois(std::istream& in, const std::string& source) {
  std::vector<PoiRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.starts_with("id")) continue;
    std::vector<std::string> fields;
    try {
      fields = split_csv_line(line);
    } catch (const std::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
    if (fields.size() != 4) {
      throw ParseError(source, line_no,
                       "expected 4 fields (id,x,y,description), got " +
                           std::to_string(fields.size()));
    }
    PoiRecord poi;
    poi.id = fields[0];
    try {
      poi.point = {parse_double(fields[1]), parse_double(fields[2])};
    } catch (const std::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
    if (!std::isfinite(poi.point.x) || !std::isfinite(poi.point.y)) {
      throw ParseError(source, line_no, "non-finite coordinate");
    }
    poi.description = fields[3];
    if (poi.id.empty()) throw ParseError(source, line_no, "empty id");
    if (poi.description.empty()) {
      throw ParseError(source, line_no, "empty description");
    }
    out.push_back(std::move(poi));
  }
  return out;
}

std::vector<PoiRecord> load_pois(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_pois: cannot open " + path.string());
  return parse_pois(in, path.string());
}

void write_pois(const std::filesystem::path& path,
                std::span<const PoiRecord> pois) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("write_pois: cannot open " + path.string());
  out << "id,x,y,description\n";
  char num[64];
  for (const auto& p : pois) {
    std::snprintf(num, sizeof(num), ",%.17g,%.17g,", p.point.x, p.point.y);
    out << csv_field(p.id) << num << csv_field(p.description) << '\n';
  }
}

}  // namespace locemb::mob
