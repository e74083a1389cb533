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

#include "locemb/geo/grid.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace locemb::geo {
namespace {

void encode_into(const GeoPoint& p, std::span<const double> radii,
                 double* out) {
  for (std::size_t s = 0; s < radii.size(); ++s) {
    const double u = p.x / radii[s];
    const double v = p.y / radii[s];
    out[4 * s + 0] = std::cos(u);
    out[4 * s + 1] = std::sin(u);
    out[4 * s + 2] = std::cos(v);
    out[4 * s + 3] = std::sin(v);
  }
}

}  // namespace

void GridSpec::validate() const {
  if (scales < 2) {
    throw std::invalid_argument("GridSpec: need at least 2 scales, got " +
                                std::to_string(scales));
  }
  if (!(min_radius > 0.0) || !(min_radius < max_radius) ||
      !std::isfinite(max_radius)) {
    throw std::invalid_argument("GridSpec: need 0 < min_radius < max_radius, "
                                "got " + std::to_string(min_radius) + " and " +
                                std::to_string(max_radius));
  }
}

std::vector<double> scale_radii(const GridSpec& spec) {
  spec.validate();
  const int n = spec.scales;
  const double ratio = spec.max_radius / spec.min_radius;
  std::vector<double> radii(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    radii[static_cast<std::size_t>(s)] =
        spec.min_radius *
        std::pow(ratio, static_cast<double>(s) / static_cast<double>(n - 1));
  }
  radii.front() = spec.min_radius;
  radii.back() = spec.max_radius;
  return radii;
}

std::vector<double> grid_pe(const GeoPoint& p, const GridSpec& spec) {
  const auto radii = scale_radii(spec);
  std::vector<double> out(spec.encoding_size());
  encode_into(p, radii, out.data());
  return out;
}

num::Tensor grid_pe_batch(std::span<const GeoPoint> points,
                          const GridSpec& spec) {
  const auto radii = scale_radii(spec);
  num::Tensor out = num::Tensor::matrix(points.size(), spec.encoding_size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    encode_into(points[i], radii, out.row_span(i).data());
  }
  return out;
}

}  // namespace locemb::geo
