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
#include <string>
#include <vector>

#include "locemb/mob/location_index.h"
#include "locemb/mob/types.h"

namespace locemb::mob {

// Parameters of the synthetic city. Coordinates are planar meters.
struct SynthConfig {
  std::uint64_t seed = 1;
  std::size_t n_users = 50;
  std::size_t n_locations = 120;
  std::size_t n_categories = 6;
  std::size_t days = 180;
  double extent_m = 10000.0;
  std::size_t regions_per_category = 2;
  double region_sigma_m = 600.0;
  std::size_t min_visits_per_day = 2;
  std::size_t max_visits_per_day = 4;
  // Per user and category, the nearest locations of that category to the
  // user's home; picked with geometrically decaying weights.
  std::size_t favourites_per_category = 3;
  double favourite_decay = 0.5;
  // Probability of visiting a uniformly drawn location of the category
  // instead of a favourite.
  double explore_probability = 0.05;
  // Extra POIs per location drawn around the regions of its category.
  std::size_t background_pois_per_location = 2;
  // Weight added to the diagonal-successor entry of each transition row,
  // giving a daily routine c -> c+1 on top of random preferences.
  double routine_strength = 2.0;
  // First day, UTC seconds.
  std::int64_t start_time = 1704067200;  // 2024-01-01

  void validate() const;
};

struct SynthCity {
  LocationIndex index;
  std::vector<VisitRecord> records;  // sorted by (user, time)
  // One per location, then background. Each description is the category
  // label, as in category-labelled POI corpora.
  std::vector<PoiRecord> pois;
  std::vector<std::string> category_tokens;
  std::map<std::string, std::size_t> category_of;  // location id -> category
  // Row-stochastic category transition matrix used by every user.
  std::vector<std::vector<double>> transition;
};

// Category token of index c; lower-case words for the first few, then
// "categoryN".
std::string category_token(std::size_t c);

SynthCity generate_synthetic_city(const SynthConfig& config);

// Writes checkins.csv and pois.csv into dir (created when missing).
void write_synthetic_city(const SynthCity& city,
                          const std::filesystem::path& dir);

// Empirical category transitions over consecutive visits of each user.
std::vector<std::vector<double>> empirical_transitions(const SynthCity& city);

// Max over rows of the total-variation distance between two row-stochastic
// matrices.
double max_row_total_variation(const std::vector<std::vector<double>>& a,
                               const std::vector<std::vector<double>>& b);

}  // namespace locemb::mob
