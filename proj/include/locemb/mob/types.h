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
#include <string>
#include <vector>

#include "locemb/geo/grid.h"

namespace locemb::mob {

// User u visited location l at UTC time t (seconds since the epoch).
struct VisitRecord {
  std::string user;
  std::string location;
  std::int64_t time = 0;

  friend bool operator==(const VisitRecord&, const VisitRecord&) = default;
};

// A place with identifier, textual context and geometry. For clustered GNSS
// locations the hull holds the convex hull of the member stay points; for
// check-in venues it is empty.
struct Location {
  std::string id;
  std::string description;
  geo::GeoPoint centroid;
  std::vector<geo::GeoPoint> hull;

  friend bool operator==(const Location&, const Location&) = default;
};

struct Visit {
  std::string location;
  std::int64_t time = 0;

  friend bool operator==(const Visit&, const Visit&) = default;
};

// The visits of one user inside the look-back window preceding a target
// visit. Context visits are time ordered and strictly precede the target.
struct MobilitySequence {
  std::uint64_t id = 0;
  std::string user;
  std::vector<Visit> context;
  Visit target;

  friend bool operator==(const MobilitySequence&,
                         const MobilitySequence&) = default;
};

// A point of interest with its textual description.
struct PoiRecord {
  std::string id;
  geo::GeoPoint point;
  std::string description;

  friend bool operator==(const PoiRecord&, const PoiRecord&) = default;
};

}  // namespace locemb::mob
