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
#include <string>
#include <vector>

#include <json.hpp>

#include "locemb/baselines/skipgram.h"
#include "locemb/calliper/pretrain.h"
#include "locemb/mob/sequences.h"
#include "locemb/mob/splits.h"
#include "locemb/mob/staypoints.h"
#include "locemb/mob/synth.h"
#include "locemb/pred/embedder.h"
#include "locemb/pred/model.h"
#include "locemb/pred/train.h"

namespace locemb::pipeline {

enum class DatasetKind { kCheckins, kTracks, kSynthetic };
std::string to_string(DatasetKind kind);
DatasetKind parse_dataset_kind(const std::string& text);

struct DatasetConfig {
  std::string name = "synthetic";
  DatasetKind kind = DatasetKind::kSynthetic;
  // Check-in file (kCheckins) or GNSS track file (kTracks).
  std::filesystem::path records;
  // POI corpus for contrastive pretraining; generated for kSynthetic.
  std::filesystem::path pois;
  mob::SynthConfig synth;
};

struct PreprocessConfig {
  std::size_t min_location_visits = 10;
  std::size_t min_user_records = 10;
  // 0 disables the tracking-days filter.
  std::size_t min_tracking_days = 0;
  double staypoint_distance_m = 200.0;
  double staypoint_time_s = 1800.0;
  double cluster_epsilon_m = 50.0;
  std::size_t cluster_min_samples = 1;
  mob::DistanceMetric metric = mob::DistanceMetric::kHaversine;
  mob::SequenceOptions sequences;
};

struct SplitConfig {
  mob::SplitMode mode = mob::SplitMode::kInductive;
  double fraction = 0.1;
  mob::SplitRatios ratios;
};

// "hashed" uses the built-in n-gram embedder of the given dimension;
// "precomputed" reads vectors from path.
struct TextConfig {
  std::string kind = "hashed";
  std::size_t dimension = 512;
  std::filesystem::path path;
};

// Everything one experiment needs. Run i uses seeds[i]: in inductive mode it
// also seeds the i-th resample of the held-out locations, so the number of
// split manifests equals the number of seeds; in conventional mode all runs
// share one split.
struct ExperimentConfig {
  std::string preset;
  DatasetConfig dataset;
  PreprocessConfig preprocess;
  SplitConfig split;
  TextConfig text;
  calliper::PretrainConfig pretrain;
  baselines::SkipgramOptions skipgram;
  pred::PredictorConfig predictor;
  pred::TrainOptions train;
  std::vector<pred::EmbedderKind> embedders = {pred::EmbedderKind::kCalliper,
                                               pred::EmbedderKind::kLookup,
                                               pred::EmbedderKind::kSkipgram};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::filesystem::path output_dir = "out";

  std::size_t runs() const { return seeds.size(); }
  // Throws std::invalid_argument for inconsistent values and, when
  // check_paths is set, std::runtime_error naming any missing input file.
  void validate(bool check_paths) const;
};

// Named defaults: "fsq-nyc", "fsq-tky", "gowalla-ld", "geolife" (dataset
// paths left empty) and "synthetic" (small enough for a laptop CPU).
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

nlohmann::json config_to_json(const ExperimentConfig& config);
// Starts from the preset named by "preset" when present, otherwise from the
// built-in defaults, then applies every key given. Unknown keys throw
// std::invalid_argument.
ExperimentConfig config_from_json(const nlohmann::json& j);
// Relative paths in the file resolve against the file's directory.
ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path,
                 const ExperimentConfig& config);

}  // namespace locemb::pipeline
