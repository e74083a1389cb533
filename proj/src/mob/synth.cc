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

#include "locemb/mob/synth.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "locemb/mob/checkins.h"
#include "locemb/mob/pois.h"
#include "locemb/num/rng.h"

namespace locemb::mob {
namespace {

constexpr std::array<const char*, 12> kCategoryTokens = {
    "cafe",   "office", "park",   "gym",     "museum", "school",
    "bar",    "market", "clinic", "library", "hotel",  "stadium"};

std::string make_id(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%05zu", prefix, i);
  return buf;
}

std::size_t draw(num::Rng& rng, const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return weights.size() - 1;
}

}  // namespace

std::string category_token(std::size_t c) {
  if (c < kCategoryTokens.size()) return kCategoryTokens[c];
  return "category" + std::to_string(c);
}

void SynthConfig::validate() const {
  if (n_users == 0 || n_locations == 0 || n_categories == 0 || days == 0 ||
      regions_per_category == 0 || favourites_per_category == 0) {
    throw std::invalid_argument("synth: sizes must be positive");
  }
  if (n_locations < n_categories) {
    throw std::invalid_argument(
        "synth: need at least one location per category");
  }
  if (min_visits_per_day == 0 || max_visits_per_day < min_visits_per_day) {
    throw std::invalid_argument("synth: bad visits-per-day range");
  }
  if (!(extent_m > 0.0) || !(region_sigma_m > 0.0) ||
      !(favourite_decay > 0.0) || explore_probability < 0.0 ||
      explore_probability > 1.0 || routine_strength < 0.0) {
    throw std::invalid_argument("synth: bad numeric parameter");
  }
}

SynthCity generate_synthetic_city(const SynthConfig& config) {
  config.validate();
  num::Rng rng(config.seed);
  SynthCity city;
  const std::size_t nc = config.n_categories;
  for (std::size_t c = 0; c < nc; ++c) {
    city.category_tokens.push_back(category_token(c));
  }

  // Regions: a few blobs per category anywhere in the square.
  std::vector<std::vector<geo::GeoPoint>> regions(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t r = 0; r < config.regions_per_category; ++r) {
      regions[c].push_back({rng.uniform(0.0, config.extent_m),
                            rng.uniform(0.0, config.extent_m)});
    }
  }
  auto around_region = [&](std::size_t c) {
    const auto& centre = regions[c][rng.below(regions[c].size())];
    return geo::GeoPoint{rng.normal(centre.x, config.region_sigma_m),
                         rng.normal(centre.y, config.region_sigma_m)};
  };

  // Locations, categories assigned round robin.
  std::vector<Location> locations;
  std::vector<std::vector<std::size_t>> by_category(nc);
  for (std::size_t i = 0; i < config.n_locations; ++i) {
    const std::size_t c = i % nc;
    Location loc;
    loc.id = make_id("loc", i);
    loc.centroid = around_region(c);
    loc.description = category_token(c);
    city.category_of[loc.id] = c;
    city.pois.push_back({loc.id, loc.centroid, loc.description});
    by_category[c].push_back(i);
    locations.push_back(loc);
  }
  std::size_t poi_id = 0;
  for (std::size_t i = 0; i < config.n_locations; ++i) {
    const std::size_t c = i % nc;
    for (std::size_t k = 0; k < config.background_pois_per_location; ++k) {
      city.pois.push_back(
          {make_id("poi", poi_id++), around_region(c), category_token(c)});
    }
  }

  // Transition matrix: random preferences plus a routine successor.
  city.transition.assign(nc, std::vector<double>(nc, 0.0));
  for (std::size_t a = 0; a < nc; ++a) {
    double total = 0.0;
    for (std::size_t b = 0; b < nc; ++b) {
      double w = rng.uniform(0.1, 1.0);
      if (b == (a + 1) % nc) w += config.routine_strength;
      city.transition[a][b] = w;
      total += w;
    }
    for (double& w : city.transition[a]) w /= total;
  }

  // Users.
  for (std::size_t u = 0; u < config.n_users; ++u) {
    const std::string user = make_id("user", u);
    const geo::GeoPoint home{rng.uniform(0.0, config.extent_m),
                             rng.uniform(0.0, config.extent_m)};
    std::vector<std::vector<std::size_t>> favourites(nc);
    for (std::size_t c = 0; c < nc; ++c) {
      std::vector<std::size_t> cand = by_category[c];
      std::stable_sort(cand.begin(), cand.end(),
                       [&](std::size_t a, std::size_t b) {
                         const auto& pa = locations[a].centroid;
                         const auto& pb = locations[b].centroid;
                         return std::hypot(pa.x - home.x, pa.y - home.y) <
                                std::hypot(pb.x - home.x, pb.y - home.y);
                       });
      cand.resize(std::min(cand.size(), config.favourites_per_category));
      favourites[c] = std::move(cand);
    }
    std::vector<double> fav_weights;
    for (std::size_t k = 0; k < config.favourites_per_category; ++k) {
      fav_weights.push_back(std::pow(config.favourite_decay,
                                     static_cast<double>(k)));
    }

    std::size_t category = rng.below(nc);
    for (std::size_t day = 0; day < config.days; ++day) {
      const std::size_t span =
          config.max_visits_per_day - config.min_visits_per_day + 1;
      const std::size_t n_visits = config.min_visits_per_day + rng.below(span);
      // Visits spread over 07:00-22:00 in equal slots, jittered inside each.
      const double slot = 15.0 * 3600.0 / static_cast<double>(n_visits);
      for (std::size_t v = 0; v < n_visits; ++v) {
        category = draw(rng, city.transition[category]);
        std::size_t loc;
        if (rng.uniform() < config.explore_probability) {
          loc = by_category[category][rng.below(by_category[category].size())];
        } else {
          const auto& fav = favourites[category];
          std::vector<double> w(fav_weights.begin(),
                                fav_weights.begin() +
                                    static_cast<long>(fav.size()));
          loc = fav[draw(rng, w)];
        }
        const double offset =
            7.0 * 3600.0 + slot * (static_cast<double>(v) + rng.uniform(0.1, 0.9));
        const std::int64_t t = config.start_time +
                               static_cast<std::int64_t>(day) * 86400 +
                               static_cast<std::int64_t>(offset);
        city.records.push_back({user, locations[loc].id, t});
      }
    }
  }
  city.index = LocationIndex(std::move(locations));
  sort_by_user_time(city.records);
  return city;
}

void write_synthetic_city(const SynthCity& city,
                          const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_checkins(dir / "checkins.csv", city.records, city.index);
  write_pois(dir / "pois.csv", city.pois);
}

std::vector<std::vector<double>> empirical_transitions(const SynthCity& city) {
  const std::size_t nc = city.category_tokens.size();
  std::vector<std::vector<double>> counts(nc, std::vector<double>(nc, 0.0));
  for (std::size_t i = 1; i < city.records.size(); ++i) {
    const auto& prev = city.records[i - 1];
    const auto& cur = city.records[i];
    if (prev.user != cur.user) continue;
    counts[city.category_of.at(prev.location)]
          [city.category_of.at(cur.location)] += 1.0;
  }
  for (auto& row : counts) {
    double total = 0.0;
    for (double c : row) total += c;
    if (total > 0.0) {
      for (double& c : row) c /= total;
    }
  }
  return counts;
}

double max_row_total_variation(const std::vector<std::vector<double>>& a,
                               const std::vector<std::vector<double>>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("max_row_total_variation: size mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) {
      throw std::invalid_argument("max_row_total_variation: size mismatch");
    }
    double tv = 0.0;
    for (std::size_t j = 0; j < a[i].size(); ++j) tv += std::abs(a[i][j] - b[i][j]);
    worst = std::max(worst, 0.5 * tv);
  }
  return worst;
}

}  // namespace locemb::mob
