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

#include <map>
#include <span>
#include <string>
#include <vector>

#include "locemb/mob/location_index.h"
#include "locemb/mob/staypoints.h"
#include "locemb/num/kernels.h"

namespace locemb::mob {

// For every point, the indices of all points within epsilon_m (itself
// included), ascending. The parallel form splits the outer loop only and
// returns exactly the serial result.
std::vector<std::vector<std::size_t>> radius_neighbours(
    std::span<const geo::GeoPoint> points, double epsilon_m,
    DistanceMetric metric, num::kernels::Exec exec);

// Convex hull (Andrew's monotone chain), counter-clockwise without
// repeated end point. Degenerate inputs give 1 or 2 points.
std::vector<geo::GeoPoint> convex_hull(std::vector<geo::GeoPoint> points);

struct Clustering {
  LocationIndex index;
  // Location id assigned to each input stay point.
  std::vector<std::string> assignment;
};

// DBSCAN over stay-point centroids. A point is core when at least
// min_samples points (itself included) lie within epsilon_m. Each cluster
// becomes one location whose geometry is the convex hull of its members and
// whose centroid is their mean; noise points become singleton locations.
// Ids are id_prefix followed by a zero-padded discovery number.
Clustering cluster_staypoints(std::span<const StayPoint> staypoints,
                              double epsilon_m, std::size_t min_samples,
                              DistanceMetric metric,
                              const std::string& id_prefix = "loc");

}  // namespace locemb::mob
