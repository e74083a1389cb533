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

#include "locemb/mob/staypoints.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "locemb/mob/csv.h"
#include "locemb/mob/time.h"

namespace locemb::mob {

double distance_m(const geo::GeoPoint& a, const geo::GeoPoint& b,
                  DistanceMetric metric) {
  if (metric == DistanceMetric::kEuclidean) {
    return std::hypot(a.x - b.x, a.y - b.y);
  }
  constexpr double kEarthRadius = 6371008.8;
  constexpr double kRad = std::numbers::pi / 180.0;
  const double dlat = (b.y - a.y) * kRad;
  const double dlon = (b.x - a.x) * kRad;
  const double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(a.y * kRad) * std::cos(b.y * kRad) *
                       std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadius * std::asin(std::min(1.0, std::sqrt(h)));
}

std::vector<StayPoint> detect_staypoints(std::span<const TrackPoint> track,
                                         double dist_threshold_m,
                                         double time_threshold_s,
                                         DistanceMetric metric) {
  if (!(dist_threshold_m > 0.0) || !(time_threshold_s > 0.0)) {
    throw std::invalid_argument("detect_staypoints: thresholds must be positive");
  }
  for (std::size_t i = 1; i < track.size(); ++i) {
    if (track[i].time < track[i - 1].time) {
      throw std::invalid_argument(
          "detect_staypoints: track is not time sorted at point " +
          std::to_string(i));
    }
  }
  std::vector<StayPoint> out;
  std::size_t i = 0;
  const std::size_t n = track.size();
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n &&
           distance_m(track[i].point, track[j].point, metric) <=
               dist_threshold_m) {
      ++j;
    }
    const double span =
        static_cast<double>(track[j - 1].time - track[i].time);
    if (j - i >= 2 && span >= time_threshold_s) {
      StayPoint sp;
      for (std::size_t k = i; k < j; ++k) {
        sp.centroid.x += track[k].point.x;
        sp.centroid.y += track[k].point.y;
      }
      sp.centroid.x /= static_cast<double>(j - i);
      sp.centroid.y /= static_cast<double>(j - i);
      sp.arrival = track[i].time;
      sp.departure = track[j - 1].time;
      out.push_back(sp);
      i = j;
    } else {
      ++i;
    }
  }
  return out;
}

std::map<std::string, std::vector<TrackPoint>> load_tracks(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_tracks: cannot open " + path.string());
  std::map<std::string, std::vector<TrackPoint>> tracks;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (line_no == 1 && !f.empty() && f[0] == "user") continue;
    if (f.size() != 4) {
      throw ParseError(path.string(), line_no,
                       "expected 4 fields (user,x,y,timestamp)");
    }
    try {
      tracks[f[0]].push_back(
          {{parse_double(f[1]), parse_double(f[2])}, parse_timestamp(f[3])});
    } catch (const std::invalid_argument& e) {
      throw ParseError(path.string(), line_no, e.what());
    }
  }
  for (auto& [user, pts] : tracks) {
    std::stable_sort(pts.begin(), pts.end(),
                     [](const TrackPoint& a, const TrackPoint& b) {
                       return a.time < b.time;
                     });
  }
  return tracks;
}

}  // namespace locemb::mob
