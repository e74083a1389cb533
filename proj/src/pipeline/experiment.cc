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


#include "locemb/pipeline/experiment.h"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "locemb/baselines/skipgram.h"
#include "locemb/baselines/vanilla.h"
#include "locemb/calliper/pretrain.h"
#include "locemb/mob/checkins.h"
#include "locemb/mob/cluster.h"
#include "locemb/mob/filter.h"
#include "locemb/mob/hash.h"
#include "locemb/mob/pois.h"
#include "locemb/mob/sequences.h"
#include "locemb/mob/staypoints.h"
#include "locemb/mob/synth.h"
#include "locemb/num/rng.h"

namespace locemb::pipeline {
namespace {

void say(const Logger& log, const std::string& msg) {
  if (log) log(msg);
}

// Stay points of every user clustered into shared locations; one visit per
// stay point at its arrival time.
mob::CheckinData records_from_tracks(const ExperimentConfig& config) {
  const auto& pp = config.preprocess;
  const auto tracks = mob::load_tracks(config.dataset.records);
  std::vector<mob::StayPoint> all;
  std::vector<std::string> owner;
  for (const auto& [user, track] : tracks) {
    for (const auto& sp : mob::detect_staypoints(
             track, pp.staypoint_distance_m, pp.staypoint_time_s, pp.metric)) {
      all.push_back(sp);
      owner.push_back(user);
    }
  }
  if (all.empty()) {
    throw mob::EmptyDatasetError("no stay points found in " +
                                 config.dataset.records.string());
  }
  auto clustering = mob::cluster_staypoints(all, pp.cluster_epsilon_m,
                                            pp.cluster_min_samples, pp.metric);
  mob::CheckinData out;
  out.index = std::move(clustering.index);
  out.records.reserve(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    out.records.push_back({owner[i], clustering.assignment[i], all[i].arrival});
  }
  mob::sort_by_user_time(out.records);
  return out;
}

std::set<std::string> record_locations(
    const std::vector<mob::VisitRecord>& records) {
  std::set<std::string> ids;
  for (const auto& r : records) ids.insert(r.location);
  return ids;
}

}  // namespace

PreparedData prepare_data(const ExperimentConfig& config) {
  PreparedData data;
  mob::CheckinData raw;
  switch (config.dataset.kind) {
    case DatasetKind::kSynthetic: {
      auto city = mob::generate_synthetic_city(config.dataset.synth);
      raw.records = std::move(city.records);
      raw.index = std::move(city.index);
      data.pois = std::move(city.pois);
      data.categories = std::move(city.category_of);
      break;
    }
    case DatasetKind::kCheckins:
      raw = mob::load_checkins(config.dataset.records);
      data.pois = mob::load_pois(config.dataset.pois);
      break;
    case DatasetKind::kTracks:
      raw = records_from_tracks(config);
      data.pois = mob::load_pois(config.dataset.pois);
      break;
  }
  const auto& pp = config.preprocess;
  std::vector<mob::VisitRecord> records = std::move(raw.records);
  if (pp.min_tracking_days > 0) {
    records = mob::filter_min_tracking_days(records, pp.min_tracking_days);
  }
  records = mob::filter_min_counts(records, pp.min_location_visits,
                                   pp.min_user_records);
  data.index = raw.index.restrict_to(record_locations(records));
  for (auto it = data.categories.begin(); it != data.categories.end();) {
    it = data.index.contains(it->first) ? std::next(it)
                                        : data.categories.erase(it);
  }
  data.sequences = mob::build_sequences(records, pp.sequences);
  data.records = std::move(records);
  if (data.sequences.empty()) {
    throw mob::EmptyDatasetError("no sequences with at least " +
                                 std::to_string(pp.sequences.min_context) +
                                 " context visits");
  }
  return data;
}

std::vector<mob::DatasetSplit> make_splits(const ExperimentConfig& config,
                                           const PreparedData& data) {
  auto conv = mob::split_conventional(
      data.sequences, mob::tracking_periods(data.records), config.split.ratios);
  if (config.split.mode == mob::SplitMode::kConventional) return {conv};
  std::vector<mob::DatasetSplit> out;
  out.reserve(config.seeds.size());
  for (auto seed : config.seeds) {
    out.push_back(mob::split_inductive(conv, config.split.fraction, seed));
  }
  return out;
}

const mob::DatasetSplit& split_for_run(
    const std::vector<mob::DatasetSplit>& splits, std::size_t run) {
  if (splits.empty()) throw std::invalid_argument("split_for_run: no splits");
  return splits.size() == 1 ? splits.front() : splits.at(run);
}

std::vector<mob::SplitManifest> make_manifests(
    const PreparedData& data, const std::vector<mob::DatasetSplit>& splits) {
  const auto seq_hash = mob::sha256_hex(mob::sequences_to_jsonl(data.sequences));
  const auto index_hash = data.index.fingerprint();
  std::vector<mob::SplitManifest> out;
  out.reserve(splits.size());
  for (const auto& s : splits) {
    out.push_back(mob::make_manifest(s, seq_hash, index_hash));
  }
  return out;
}

std::uint64_t stage_seed(std::uint64_t run_seed, Stage stage) {
  return num::mix_seed(run_seed, static_cast<std::uint64_t>(stage));
}

std::unique_ptr<calliper::TextEmbedder> make_text_embedder(
    const TextConfig& config) {
  if (config.kind == "hashed") {
    return std::make_unique<calliper::HashedNgramEmbedder>(config.dimension);
  }
  if (config.kind == "precomputed") {
    return std::make_unique<calliper::PrecomputedTextEmbedder>(
        calliper::PrecomputedTextEmbedder::load(config.path));
  }
  throw std::invalid_argument("unknown text embedder '" + config.kind + "'");
}

std::vector<mob::PoiRecord> pretraining_pois(
    const std::vector<mob::PoiRecord>& pois, const mob::DatasetSplit& split) {
  std::vector<mob::PoiRecord> out;
  out.reserve(pois.size());
  for (const auto& p : pois) {
    if (!split.new_locations.contains(p.id)) out.push_back(p);
  }
  return out;
}

EmbedderResult build_embedder(pred::EmbedderKind kind,
                              const ExperimentConfig& config,
                              const PreparedData& data,
                              const mob::DatasetSplit& split,
                              std::uint64_t run_seed, const Logger& log) {
  EmbedderResult out;
  switch (kind) {
    case pred::EmbedderKind::kCalliper: {
      const auto text = make_text_embedder(config.text);
      auto cfg = config.pretrain;
      cfg.seed = stage_seed(run_seed, Stage::kPretrain);
      cfg.shape.text_dim = text->dimension();
      const auto pois = pretraining_pois(data.pois, split);
      auto result = calliper::pretrain(pois, *text, cfg);
      out.handle = pred::calliper_embedder(result.model, data.index);
      out.model = std::move(result.model);
      out.losses = std::move(result.epoch_losses);
      say(log, "pretrain calliper: " + std::to_string(pois.size()) +
                   " POIs, final loss " + std::to_string(out.losses.back()));
      break;
    }
    case pred::EmbedderKind::kLookup:
      out.handle = baselines::vanilla_e2e_embedder(
          data.index, config.pretrain.shape.embedding_dim,
          stage_seed(run_seed, Stage::kLookup));
      break;
    case pred::EmbedderKind::kSkipgram: {
      auto opts = config.skipgram;
      opts.seed = stage_seed(run_seed, Stage::kSkipgram);
      auto result = baselines::skipgram_pretrain(
          std::span<const mob::MobilitySequence>(split.train), data.index,
          opts);
      out.handle = std::move(result.handle);
      out.losses = std::move(result.epoch_losses);
      say(log, "pretrain skipgram: final loss " +
                   std::to_string(out.losses.back()));
      break;
    }
  }
  return out;
}

std::vector<std::string> train_users(const mob::DatasetSplit& split) {
  std::set<std::string> users;
  for (const auto& s : split.train) users.insert(s.user);
  return {users.begin(), users.end()};
}

Evaluation evaluate(const pred::Predictor& model,
                    const mob::DatasetSplit& split, num::kernels::Exec exec) {
  if (split.test.empty()) throw std::invalid_argument("evaluate: empty test set");
  const auto probs = model.predict_batch(split.test, exec);
  std::vector<std::size_t> targets;
  targets.reserve(split.test.size());
  for (const auto& s : split.test) {
    targets.push_back(model.index().index_of(s.target.location));
  }
  Evaluation out;
  out.ranks = eval::ranks(probs, targets, exec);
  out.all = eval::RunMetrics::from_ranks(out.ranks);
  out.all_samples = out.ranks.size();
  std::vector<std::size_t> held_out;
  for (std::size_t i = 0; i < split.test.size(); ++i) {
    if (split.new_locations.contains(split.test[i].target.location)) {
      held_out.push_back(out.ranks[i]);
    }
  }
  out.new_samples = held_out.size();
  if (!held_out.empty()) out.new_targets = eval::RunMetrics::from_ranks(held_out);
  return out;
}

RunRecord run_once(const ExperimentConfig& config, const PreparedData& data,
                   const mob::DatasetSplit& split,
                   const std::string& manifest_hash, std::size_t run,
                   pred::EmbedderKind kind, const ExperimentHooks& hooks) {
  RunRecord rec;
  rec.run = run;
  rec.seed = config.seeds.at(run);
  rec.kind = kind;
  rec.manifest_hash = manifest_hash;
  const std::string tag =
      "run " + std::to_string(run) + " " + pred::to_string(kind) + ": ";
  auto logger = [&](const std::string& m) { say(hooks.log, tag + m); };

  const auto emb = build_embedder(kind, config, data, split, rec.seed, logger);
  if (hooks.on_embedder) hooks.on_embedder(run, kind, emb, split);

  pred::Predictor model(config.predictor, emb.handle, data.index,
                        train_users(split),
                        stage_seed(rec.seed, Stage::kPredictor));
  auto opts = config.train;
  opts.seed = stage_seed(rec.seed, Stage::kPredictor);
  rec.training = pred::train(model, split.train, split.validation, opts,
                             [&](const pred::EpochRecord& e) {
                               logger(pred::to_json_line(e));
                             });
  if (hooks.on_predictor) hooks.on_predictor(run, kind, model, rec.training);
  rec.evaluation = evaluate(model, split, config.train.exec);
  logger("acc@5 all " + std::to_string(rec.evaluation.all.acc5) +
         (rec.evaluation.new_targets
              ? ", held-out targets " +
                    std::to_string(rec.evaluation.new_targets->acc5) + " (" +
                    std::to_string(rec.evaluation.new_samples) + " samples)"
              : std::string()));
  return rec;
}

std::vector<eval::MetricsReport> build_reports(
    const ExperimentConfig& config, pred::EmbedderKind kind,
    const std::vector<RunRecord>& runs) {
  eval::MetricsReport all;
  all.dataset = config.dataset.name;
  all.split_mode = mob::to_string(config.split.mode);
  all.embedder = pred::to_string(kind);
  eval::MetricsReport fresh = all;
  fresh.targets = "new";
  for (const auto& r : runs) {
    if (r.kind != kind) continue;
    all.seeds.push_back(r.seed);
    all.manifest_hashes.push_back(r.manifest_hash);
    all.samples.push_back(r.evaluation.all_samples);
    all.runs.push_back(r.evaluation.all);
    if (r.evaluation.new_targets) {
      fresh.seeds.push_back(r.seed);
      fresh.manifest_hashes.push_back(r.manifest_hash);
      fresh.samples.push_back(r.evaluation.new_samples);
      fresh.runs.push_back(*r.evaluation.new_targets);
    }
  }
  std::vector<eval::MetricsReport> out = {all};
  if (!fresh.runs.empty()) out.push_back(fresh);
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const PreparedData& data,
                                const ExperimentHooks& hooks) {
  config.validate(false);
  const auto splits = make_splits(config, data);
  const auto manifests = make_manifests(data, splits);
  ExperimentResult result;
  for (std::size_t run = 0; run < config.runs(); ++run) {
    const std::size_t s = splits.size() == 1 ? 0 : run;
    for (auto kind : config.embedders) {
      result.runs.push_back(run_once(config, data, splits[s],
                                     manifests[s].content_sha256, run, kind,
                                     hooks));
    }
  }
  for (auto kind : config.embedders) {
    for (auto& r : build_reports(config, kind, result.runs)) {
      result.reports.push_back(std::move(r));
    }
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const ExperimentHooks& hooks) {
  config.validate(true);
  return run_experiment(config, prepare_data(config), hooks);
}

}  // namespace locemb::pipeline
