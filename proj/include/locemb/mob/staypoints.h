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
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "locemb/geo/grid.h"

namespace locemb::mob {

struct TrackPoint {
  geo::GeoPoint point;
  std::int64_t time = 0;
};

struct StayPoint {
  geo::GeoPoint centroid;
  std::int64_t arrival = 0;
  std::int64_t departure = 0;
};

// kHaversine reads x as longitude and y as latitude in degrees; kEuclidean
// treats coordinates as metres.
enum class DistanceMetric { kEuclidean, kHaversine };

double distance_m(const geo::GeoPoint& a, const geo::GeoPoint& b,
                  DistanceMetric metric);

// Anchor-based stay point detection. From anchor i the track is extended
// while points stay within dist_threshold_m of point i; when the covered
// span lasts at least time_threshold_s the run becomes one stay point at the
// arithmetic centroid and scanning resumes after it, otherwise the anchor
// advances by one. Throws std::invalid_argument on unsorted input or
// non-positive thresholds.
std::vector<StayPoint> detect_staypoints(std::span<const TrackPoint> track,
                                         double dist_threshold_m,
                                         double time_threshold_s,
                                         DistanceMetric metric);

// GNSS track file: `user,x,y,timestamp` with an optional header. Points come
// back grouped per user and time sorted.
std::map<std::string, std::vector<TrackPoint>> load_tracks(
    const std::filesystem::path& path);

}  // namespace locemb::mob
