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
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "locemb/calliper/model.h"
#include "locemb/calliper/text_embedder.h"
#include "locemb/eval/metrics.h"
#include "locemb/eval/report.h"
#include "locemb/mob/location_index.h"
#include "locemb/mob/manifest.h"
#include "locemb/mob/splits.h"
#include "locemb/mob/types.h"
#include "locemb/pipeline/config.h"
#include "locemb/pred/embedder.h"
#include "locemb/pred/model.h"
#include "locemb/pred/train.h"

namespace locemb::pipeline {

// Filtered records, the locations they mention, their sequences and the
// POI corpus.
struct PreparedData {
  mob::LocationIndex index;
  std::vector<mob::VisitRecord> records;
  std::vector<mob::MobilitySequence> sequences;
  std::vector<mob::PoiRecord> pois;
  // Location id -> category; only known for synthetic data.
  std::map<std::string, std::size_t> categories;
};

// Loads (or generates) the dataset and applies the preprocessing rules.
// Track data go through stay point detection and clustering first.
PreparedData prepare_data(const ExperimentConfig& config);

// Conventional mode: one split. Inductive mode: one resample of the
// held-out locations per seed, all sharing the conventional test set.
std::vector<mob::DatasetSplit> make_splits(const ExperimentConfig& config,
                                           const PreparedData& data);
const mob::DatasetSplit& split_for_run(
    const std::vector<mob::DatasetSplit>& splits, std::size_t run);
std::vector<mob::SplitManifest> make_manifests(
    const PreparedData& data, const std::vector<mob::DatasetSplit>& splits);

// Independent sub-seeds of one run seed.
enum class Stage : std::uint64_t {
  kPretrain = 1,
  kLookup = 2,
  kSkipgram = 3,
  kPredictor = 4
};
std::uint64_t stage_seed(std::uint64_t run_seed, Stage stage);

std::unique_ptr<calliper::TextEmbedder> make_text_embedder(
    const TextConfig& config);

// The POI corpus minus POIs whose id is a held-out location.
std::vector<mob::PoiRecord> pretraining_pois(
    const std::vector<mob::PoiRecord>& pois, const mob::DatasetSplit& split);

struct EmbedderResult {
  pred::EmbedderHandle handle;
  // Set for the calliper kind.
  std::optional<calliper::Model> model;
  // Per-epoch pretraining loss; empty for the lookup table.
  std::vector<double> losses;
};

using Logger = std::function<void(const std::string&)>;

// Calliper pretrains on the POI corpus only; skip-gram reads only the
// split's train sequences; the lookup table needs neither.
EmbedderResult build_embedder(pred::EmbedderKind kind,
                              const ExperimentConfig& config,
                              const PreparedData& data,
                              const mob::DatasetSplit& split,
                              std::uint64_t run_seed,
                              const Logger& log = {});

// Users that occur in the train sequences, sorted.
std::vector<std::string> train_users(const mob::DatasetSplit& split);

struct Evaluation {
  eval::RunMetrics all;
  std::size_t all_samples = 0;
  // Test samples whose target is a held-out location; absent when there
  // are none.
  std::optional<eval::RunMetrics> new_targets;
  std::size_t new_samples = 0;
  std::vector<std::size_t> ranks;
};

Evaluation evaluate(const pred::Predictor& model,
                    const mob::DatasetSplit& split,
                    num::kernels::Exec exec);

struct RunRecord {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  pred::EmbedderKind kind = pred::EmbedderKind::kLookup;
  std::string manifest_hash;
  pred::TrainReport training;
  Evaluation evaluation;
};

struct ExperimentResult {
  // Per embedder kind: the report over all test samples, followed in
  // inductive mode by the report over held-out targets.
  std::vector<eval::MetricsReport> reports;
  std::vector<RunRecord> runs;
};

struct ExperimentHooks {
  Logger log;
  // After each embedder is built, before the predictor is trained.
  std::function<void(std::size_t run, pred::EmbedderKind,
                     const EmbedderResult&, const mob::DatasetSplit&)>
      on_embedder;
  // After each predictor is trained.
  std::function<void(std::size_t run, pred::EmbedderKind,
                     const pred::Predictor&, const pred::TrainReport&)>
      on_predictor;
};

// Trains and evaluates one predictor per (run, embedder kind).
RunRecord run_once(const ExperimentConfig& config, const PreparedData& data,
                   const mob::DatasetSplit& split,
                   const std::string& manifest_hash, std::size_t run,
                   pred::EmbedderKind kind, const ExperimentHooks& hooks = {});

// Reports for every configured embedder kind; each run's seed and split
// manifest hash are recorded so the run can be replayed.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const PreparedData& data,
                                const ExperimentHooks& hooks = {});
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const ExperimentHooks& hooks = {});

// Collects run records of one kind into reports (all targets, then the
// held-out targets when any run has them).
std::vector<eval::MetricsReport> build_reports(
    const ExperimentConfig& config, pred::EmbedderKind kind,
    const std::vector<RunRecord>& runs);

}  // namespace locemb::pipeline
