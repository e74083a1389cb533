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

#include "locemb/mob/cluster.h"

#include <algorithm>
#include <cstdint>
#include <deque>

namespace locemb::mob {
namespace {

std::vector<std::size_t> neighbours_of(std::span<const geo::GeoPoint> points,
                                       std::size_t i, double eps,
                                       DistanceMetric metric) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (distance_m(points[i], points[j], metric) <= eps) out.push_back(j);
  }
  return out;
}

double cross(const geo::GeoPoint& o, const geo::GeoPoint& a,
             const geo::GeoPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

std::vector<std::vector<std::size_t>> radius_neighbours(
    std::span<const geo::GeoPoint> points, double epsilon_m,
    DistanceMetric metric, num::kernels::Exec exec) {
  std::vector<std::vector<std::size_t>> out(points.size());
  if (exec == num::kernels::Exec::kParallel) {
    const auto n = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] =
          neighbours_of(points, static_cast<std::size_t>(i), epsilon_m, metric);
    }
    return out;
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    out[i] = neighbours_of(points, i, epsilon_m, metric);
  }
  return out;
}

std::vector<geo::GeoPoint> convex_hull(std::vector<geo::GeoPoint> points) {
  std::sort(points.begin(), points.end(),
            [](const geo::GeoPoint& a, const geo::GeoPoint& b) {
              return a.x < b.x || (a.x == b.x && a.y < b.y);
            });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;
  std::vector<geo::GeoPoint> hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

Clustering cluster_staypoints(std::span<const StayPoint> staypoints,
                              double epsilon_m, std::size_t min_samples,
                              DistanceMetric metric,
                              const std::string& id_prefix) {
  std::vector<geo::GeoPoint> points;
  points.reserve(staypoints.size());
  for (const auto& sp : staypoints) points.push_back(sp.centroid);
  const auto exec = num::kernels::openmp_enabled() &&
                            num::kernels::max_threads() > 1
                        ? num::kernels::Exec::kParallel
                        : num::kernels::Exec::kSerial;
  const auto neighbours = radius_neighbours(points, epsilon_m, metric, exec);

  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  constexpr std::size_t kNoise = kUnset - 1;
  auto is_core = [&](std::size_t i) {
    return neighbours[i].size() >= min_samples;
  };
  std::vector<std::size_t> label(points.size(), kUnset);
  std::size_t next_label = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (label[i] != kUnset) continue;
    if (!is_core(i)) {
      label[i] = kNoise;
      continue;
    }
    const std::size_t cluster = next_label++;
    label[i] = cluster;
    std::deque<std::size_t> frontier(neighbours[i].begin(),
                                     neighbours[i].end());
    while (!frontier.empty()) {
      const std::size_t j = frontier.front();
      frontier.pop_front();
      if (label[j] == kNoise) {
        label[j] = cluster;  // border point
        continue;
      }
      if (label[j] != kUnset) continue;
      label[j] = cluster;
      if (is_core(j)) {
        frontier.insert(frontier.end(), neighbours[j].begin(),
                        neighbours[j].end());
      }
    }
  }
  for (auto& l : label) {
    if (l == kNoise) l = next_label++;
  }

  std::vector<std::vector<geo::GeoPoint>> members(next_label);
  for (std::size_t i = 0; i < points.size(); ++i) {
    members[label[i]].push_back(points[i]);
  }
  const int width = std::max<int>(
      5, static_cast<int>(std::to_string(next_label).size()));
  std::vector<std::string> ids(next_label);
  std::vector<Location> locations;
  locations.reserve(next_label);
  for (std::size_t c = 0; c < next_label; ++c) {
    const std::string digits = std::to_string(c);
    ids[c] = id_prefix +
             std::string(static_cast<std::size_t>(width) - digits.size(), '0') +
             digits;
    Location loc;
    loc.id = ids[c];
    for (const auto& p : members[c]) {
      loc.centroid.x += p.x;
      loc.centroid.y += p.y;
    }
    loc.centroid.x /= static_cast<double>(members[c].size());
    loc.centroid.y /= static_cast<double>(members[c].size());
    loc.hull = convex_hull(members[c]);
    locations.push_back(std::move(loc));
  }
  Clustering result;
  result.index = LocationIndex(std::move(locations));
  result.assignment.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    result.assignment.push_back(ids[label[i]]);
  }
  return result;
}

}  // namespace locemb::mob
