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
#include <vector>

#include "locemb/num/tensor.h"

namespace locemb::geo {

// A planar coordinate in the dataset's native units (degrees for check-in
// data, metres for projected data).
struct GeoPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

// Multiscale sinusoidal encoding parameters. Radii use the same units as
// the coordinates they encode.
struct GridSpec {
  double min_radius = 0.01;
  double max_radius = 10.0;
  int scales = 32;

  // Throws std::invalid_argument unless 0 < min_radius < max_radius and
  // scales >= 2.
  void validate() const;
  std::size_t encoding_size() const { return 4 * static_cast<std::size_t>(scales); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Geometric sequence of `scales` radii from min_radius to max_radius; the
// endpoints are exact.
std::vector<double> scale_radii(const GridSpec& spec);

// Per scale s: (cos(x/a_s), sin(x/a_s), cos(y/a_s), sin(y/a_s)).
std::vector<double> grid_pe(const GeoPoint& p, const GridSpec& spec);

// One grid_pe row per point.
num::Tensor grid_pe_batch(std::span<const GeoPoint> points,
                          const GridSpec& spec);

}  // namespace locemb::geo
