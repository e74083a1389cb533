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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "locemb/eval/report.h"
#include "locemb/mob/location_index.h"
#include "locemb/mob/manifest.h"
#include "locemb/pipeline/config.h"
#include "locemb/pipeline/experiment.h"

namespace locemb::pipeline {

// Artifact locations below the output directory.
//
//   data/raw/{checkins,pois}.csv          synth
//   data/{locations,pois,categories}.csv  preprocess
//   data/sequences.jsonl                  preprocess
//   splits/split_<i>.json                 preprocess
//   models/<kind>_run<i>.table            pretrain
//   models/calliper_run<i>.encoder        pretrain
//   models/predictor_<kind>_run<i>.ckpt   train
//   logs/{pretrain,train}_<kind>_run<i>.jsonl
//   reports/<kind>_<mode>[_new].json, reports/table.txt
//   figures/<kind>_run<i>.{svg,csv}
struct Layout {
  std::filesystem::path root;

  std::filesystem::path raw_dir() const { return root / "data" / "raw"; }
  std::filesystem::path locations() const {
    return root / "data" / "locations.csv";
  }
  std::filesystem::path pois() const { return root / "data" / "pois.csv"; }
  std::filesystem::path categories() const {
    return root / "data" / "categories.csv";
  }
  std::filesystem::path sequences() const {
    return root / "data" / "sequences.jsonl";
  }
  std::filesystem::path split(std::size_t i) const;
  std::filesystem::path table(pred::EmbedderKind kind, std::size_t run) const;
  std::filesystem::path encoder(std::size_t run) const;
  std::filesystem::path predictor(pred::EmbedderKind kind,
                                  std::size_t run) const;
  std::filesystem::path log(const std::string& stage, pred::EmbedderKind kind,
                            std::size_t run) const;
  std::filesystem::path report(const eval::MetricsReport& report) const;
  std::filesystem::path summary_table() const {
    return root / "reports" / "table.txt";
  }
  std::filesystem::path figure(pred::EmbedderKind kind, std::size_t run,
                               const std::string& ext) const;
};

// `id,x,y,description` with a header; descriptions may be empty.
void write_locations(const std::filesystem::path& path,
                     const mob::LocationIndex& index);
mob::LocationIndex read_locations(const std::filesystem::path& path);

// `location,category` with a header.
void write_categories(const std::filesystem::path& path,
                      const std::map<std::string, std::size_t>& categories);
std::map<std::string, std::size_t> read_categories(
    const std::filesystem::path& path);

// Preprocessed data and the splits rebuilt from their manifests.
struct Artifacts {
  PreparedData data;
  std::vector<mob::SplitManifest> manifests;
  std::vector<mob::DatasetSplit> splits;
};

// Reads what preprocess wrote. Throws std::runtime_error when a file is
// missing, when a manifest's content hash does not verify, or when a
// manifest was written for other sequences, another LocationIndex or
// another seed list.
Artifacts load_artifacts(const ExperimentConfig& config);

// Writes the synthetic city to data/raw; returns that directory.
std::filesystem::path cmd_synth(const ExperimentConfig& config);
// Writes data/ and one manifest per split.
void cmd_preprocess(const ExperimentConfig& config, const Logger& log = {});
// One embedder checkpoint per (run, kind) plus its loss log.
void cmd_pretrain(const ExperimentConfig& config, const Logger& log = {});
// One predictor checkpoint per (run, kind) plus its epoch log.
void cmd_train(const ExperimentConfig& config, const Logger& log = {});
// Reports per embedder kind (see build_reports), also written to reports/.
std::vector<eval::MetricsReport> cmd_evaluate(const ExperimentConfig& config,
                                              const Logger& log = {});
// 2-D projection of each kind's location table for one run, held-out
// locations highlighted.
void cmd_visualize(const ExperimentConfig& config, std::size_t run = 0,
                   const Logger& log = {});

}  // namespace locemb::pipeline
