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


#include "locemb/pipeline/config.h"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace locemb::pipeline {
namespace {

using nlohmann::json;

// Applies the keys of one JSON object to existing values and rejects keys
// nobody asked for, so typos surface instead of silently using defaults.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where)
      : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) {
      throw std::invalid_argument("config: " + where_ + " must be an object");
    }
  }

  template <typename T>
  void read(const char* key, T& out) {
    if (!j_.contains(key)) return;
    used_.insert(key);
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw std::invalid_argument("config: " + where_ + "." + key + ": " +
                                  e.what());
    }
  }

  void read_path(const char* key, std::filesystem::path& out) {
    std::string s = out.string();
    read(key, s);
    out = s;
  }

  template <typename Parse, typename T>
  void read_enum(const char* key, T& out, Parse parse) {
    if (!j_.contains(key)) return;
    std::string s;
    read(key, s);
    try {
      out = parse(s);
    } catch (const std::exception& e) {
      throw std::invalid_argument("config: " + where_ + "." + key + ": " +
                                  e.what());
    }
  }

  const json* child(const char* key) {
    if (!j_.contains(key)) return nullptr;
    used_.insert(key);
    return &j_.at(key);
  }

  std::string where(const char* key) const { return where_ + "." + key; }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!used_.contains(item.key())) {
        throw std::invalid_argument("config: unknown key " + where_ + "." +
                                    item.key());
      }
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

std::string metric_name(mob::DistanceMetric m) {
  return m == mob::DistanceMetric::kHaversine ? "haversine" : "euclidean";
}

mob::DistanceMetric parse_metric(const std::string& s) {
  if (s == "haversine") return mob::DistanceMetric::kHaversine;
  if (s == "euclidean") return mob::DistanceMetric::kEuclidean;
  throw std::invalid_argument("unknown distance metric '" + s + "'");
}

json synth_to_json(const mob::SynthConfig& s) {
  return {{"seed", s.seed},
          {"n_users", s.n_users},
          {"n_locations", s.n_locations},
          {"n_categories", s.n_categories},
          {"days", s.days},
          {"extent_m", s.extent_m},
          {"regions_per_category", s.regions_per_category},
          {"region_sigma_m", s.region_sigma_m},
          {"min_visits_per_day", s.min_visits_per_day},
          {"max_visits_per_day", s.max_visits_per_day},
          {"favourites_per_category", s.favourites_per_category},
          {"favourite_decay", s.favourite_decay},
          {"explore_probability", s.explore_probability},
          {"background_pois_per_location", s.background_pois_per_location},
          {"routine_strength", s.routine_strength},
          {"start_time", s.start_time}};
}

void synth_from_json(const json& j, const std::string& where,
                     mob::SynthConfig& s) {
  ObjectReader r(j, where);
  r.read("seed", s.seed);
  r.read("n_users", s.n_users);
  r.read("n_locations", s.n_locations);
  r.read("n_categories", s.n_categories);
  r.read("days", s.days);
  r.read("extent_m", s.extent_m);
  r.read("regions_per_category", s.regions_per_category);
  r.read("region_sigma_m", s.region_sigma_m);
  r.read("min_visits_per_day", s.min_visits_per_day);
  r.read("max_visits_per_day", s.max_visits_per_day);
  r.read("favourites_per_category", s.favourites_per_category);
  r.read("favourite_decay", s.favourite_decay);
  r.read("explore_probability", s.explore_probability);
  r.read("background_pois_per_location", s.background_pois_per_location);
  r.read("routine_strength", s.routine_strength);
  r.read("start_time", s.start_time);
  r.finish();
}

void grid_from_json(const json& j, const std::string& where,
                    geo::GridSpec& g) {
  ObjectReader r(j, where);
  r.read("min_radius", g.min_radius);
  r.read("max_radius", g.max_radius);
  r.read("scales", g.scales);
  r.finish();
}

ExperimentConfig base_defaults() {
  ExperimentConfig c;
  c.pretrain.shape.grid = {0.01, 10.0, 32};
  c.pretrain.shape.hidden = 256;
  c.pretrain.shape.embedding_dim = 128;
  c.pretrain.learning_rate = 1e-3;
  c.skipgram.dimension = 128;
  return c;
}

ExperimentConfig real_dataset(const std::string& name, DatasetKind kind,
                              geo::GridSpec grid, std::size_t batch) {
  ExperimentConfig c = base_defaults();
  c.preset = name;
  c.dataset.name = name;
  c.dataset.kind = kind;
  c.pretrain.shape.grid = grid;
  c.pretrain.batch_size = batch;
  c.output_dir = "out/" + name;
  return c;
}

ExperimentConfig synthetic_preset() {
  ExperimentConfig c = base_defaults();
  c.preset = "synthetic";
  c.dataset.name = "synthetic";
  c.dataset.kind = DatasetKind::kSynthetic;
  c.dataset.synth.min_visits_per_day = 1;
  c.dataset.synth.max_visits_per_day = 3;
  c.preprocess.metric = mob::DistanceMetric::kEuclidean;
  // Coordinates are metres; the finest scale sits near the spacing of
  // neighbouring venues.
  c.pretrain.shape.grid = {500.0, 20000.0, 16};
  c.pretrain.shape.hidden = 128;
  c.pretrain.batch_size = 64;
  c.pretrain.epochs = 60;
  c.skipgram.epochs = 10;
  c.predictor.layers = 2;
  c.predictor.heads = 4;
  c.predictor.ff_dim = 64;
  c.predictor.d_model = 32;
  c.predictor.max_context = 16;
  c.predictor.time_dim = 8;
  c.predictor.dow_dim = 4;
  c.predictor.user_dim = 8;
  c.predictor.head = pred::HeadKind::kTied;
  c.train.batch_size = 32;
  c.train.max_epochs = 15;
  c.train.patience = 3;
  c.output_dir = "out/synthetic";
  return c;
}

}  // namespace

std::string to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kCheckins:
      return "checkins";
    case DatasetKind::kTracks:
      return "tracks";
    case DatasetKind::kSynthetic:
      return "synthetic";
  }
  return "synthetic";
}

DatasetKind parse_dataset_kind(const std::string& text) {
  if (text == "checkins") return DatasetKind::kCheckins;
  if (text == "tracks") return DatasetKind::kTracks;
  if (text == "synthetic") return DatasetKind::kSynthetic;
  throw std::invalid_argument("unknown dataset kind '" + text + "'");
}

void ExperimentConfig::validate(bool check_paths) const {
  if (seeds.empty()) {
    throw std::invalid_argument("config: at least one seed (run) is required");
  }
  if (embedders.empty()) {
    throw std::invalid_argument("config: no embedder kinds requested");
  }
  if (split.mode == mob::SplitMode::kInductive &&
      !(split.fraction > 0.0 && split.fraction < 1.0)) {
    throw std::invalid_argument("config: split fraction must lie in (0, 1)");
  }
  if (text.kind != "hashed" && text.kind != "precomputed") {
    throw std::invalid_argument("config: unknown text embedder '" + text.kind +
                                "'");
  }
  if (text.kind == "hashed" && text.dimension == 0) {
    throw std::invalid_argument("config: text dimension must be positive");
  }
  if (dataset.kind == DatasetKind::kSynthetic) dataset.synth.validate();
  pretrain.shape.grid.validate();
  pretrain.validate();
  skipgram.validate();
  predictor.validate();
  train.validate();
  if (!check_paths) return;
  auto need = [](const std::filesystem::path& p, const char* what) {
    if (p.empty()) {
      throw std::runtime_error(std::string("config: ") + what + " path not set");
    }
    if (!std::filesystem::exists(p)) {
      throw std::runtime_error(std::string("config: ") + what + " '" +
                               p.string() + "' does not exist");
    }
  };
  if (dataset.kind != DatasetKind::kSynthetic) {
    need(dataset.records, "dataset.records");
    need(dataset.pois, "dataset.pois");
  }
  if (text.kind == "precomputed") need(text.path, "text.path");
}

std::vector<std::string> preset_names() {
  return {"fsq-nyc", "fsq-tky", "gowalla-ld", "geolife", "synthetic"};
}

ExperimentConfig preset(const std::string& name) {
  if (name == "fsq-nyc") {
    return real_dataset(name, DatasetKind::kCheckins, {0.01, 10.0, 32}, 128);
  }
  if (name == "fsq-tky") {
    return real_dataset(name, DatasetKind::kCheckins, {0.01, 10.0, 32}, 256);
  }
  if (name == "gowalla-ld") {
    // Radii 1 to 1000 suit projected coordinates in metres.
    ExperimentConfig c =
        real_dataset(name, DatasetKind::kCheckins, {1.0, 1000.0, 32}, 1024);
    c.preprocess.metric = mob::DistanceMetric::kEuclidean;
    return c;
  }
  if (name == "geolife") {
    ExperimentConfig c =
        real_dataset(name, DatasetKind::kTracks, {0.01, 10.0, 32}, 256);
    c.preprocess.min_tracking_days = 50;
    c.preprocess.min_location_visits = 1;
    c.preprocess.min_user_records = 1;
    return c;
  }
  if (name == "synthetic") return synthetic_preset();
  throw std::invalid_argument("unknown preset '" + name + "'");
}

json config_to_json(const ExperimentConfig& c) {
  json embedders = json::array();
  for (auto k : c.embedders) embedders.push_back(pred::to_string(k));
  const auto& g = c.pretrain.shape.grid;
  return {
      {"preset", c.preset},
      {"dataset",
       {{"name", c.dataset.name},
        {"kind", to_string(c.dataset.kind)},
        {"records", c.dataset.records.string()},
        {"pois", c.dataset.pois.string()},
        {"synth", synth_to_json(c.dataset.synth)}}},
      {"preprocess",
       {{"min_location_visits", c.preprocess.min_location_visits},
        {"min_user_records", c.preprocess.min_user_records},
        {"min_tracking_days", c.preprocess.min_tracking_days},
        {"staypoint_distance_m", c.preprocess.staypoint_distance_m},
        {"staypoint_time_s", c.preprocess.staypoint_time_s},
        {"cluster_epsilon_m", c.preprocess.cluster_epsilon_m},
        {"cluster_min_samples", c.preprocess.cluster_min_samples},
        {"metric", metric_name(c.preprocess.metric)},
        {"window_seconds", c.preprocess.sequences.window_seconds},
        {"min_context", c.preprocess.sequences.min_context}}},
      {"split",
       {{"mode", mob::to_string(c.split.mode)},
        {"fraction", c.split.fraction},
        {"ratios",
         {c.split.ratios.train, c.split.ratios.validation,
          c.split.ratios.test}}}},
      {"text",
       {{"kind", c.text.kind},
        {"dimension", c.text.dimension},
        {"path", c.text.path.string()}}},
      {"grid",
       {{"min_radius", g.min_radius},
        {"max_radius", g.max_radius},
        {"scales", g.scales}}},
      {"pretrain",
       {{"batch_size", c.pretrain.batch_size},
        {"temperature", c.pretrain.temperature},
        {"epochs", c.pretrain.epochs},
        {"learning_rate", c.pretrain.learning_rate},
        {"hidden", c.pretrain.shape.hidden},
        {"embedding_dim", c.pretrain.shape.embedding_dim}}},
      {"skipgram",
       {{"dimension", c.skipgram.dimension},
        {"window", c.skipgram.window},
        {"negatives", c.skipgram.negatives},
        {"epochs", c.skipgram.epochs},
        {"batch_size", c.skipgram.batch_size},
        {"learning_rate", c.skipgram.learning_rate}}},
      {"predictor",
       {{"layers", c.predictor.layers},
        {"heads", c.predictor.heads},
        {"ff_dim", c.predictor.ff_dim},
        {"dropout", c.predictor.dropout},
        {"d_model", c.predictor.d_model},
        {"max_context", c.predictor.max_context},
        {"time_dim", c.predictor.time_dim},
        {"dow_dim", c.predictor.dow_dim},
        {"user_dim", c.predictor.user_dim},
        {"head", pred::to_string(c.predictor.head)}}},
      {"train",
       {{"batch_size", c.train.batch_size},
        {"max_epochs", c.train.max_epochs},
        {"patience", c.train.patience},
        {"learning_rate", c.train.learning_rate},
        {"chunk_size", c.train.chunk_size},
        {"parallel", c.train.exec == num::kernels::Exec::kParallel}}},
      {"embedders", embedders},
      {"seeds", c.seeds},
      {"output_dir", c.output_dir.string()}};
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c = base_defaults();
  ObjectReader top(j, "config");
  if (j.is_object() && j.contains("preset")) {
    std::string name;
    top.read("preset", name);
    if (!name.empty()) c = preset(name);
    c.preset = name;
  }
  if (const json* d = top.child("dataset")) {
    ObjectReader r(*d, "dataset");
    r.read("name", c.dataset.name);
    r.read_enum("kind", c.dataset.kind, parse_dataset_kind);
    r.read_path("records", c.dataset.records);
    r.read_path("pois", c.dataset.pois);
    if (const json* s = r.child("synth")) {
      synth_from_json(*s, r.where("synth"), c.dataset.synth);
    }
    r.finish();
  }
  if (const json* p = top.child("preprocess")) {
    ObjectReader r(*p, "preprocess");
    auto& pp = c.preprocess;
    r.read("min_location_visits", pp.min_location_visits);
    r.read("min_user_records", pp.min_user_records);
    r.read("min_tracking_days", pp.min_tracking_days);
    r.read("staypoint_distance_m", pp.staypoint_distance_m);
    r.read("staypoint_time_s", pp.staypoint_time_s);
    r.read("cluster_epsilon_m", pp.cluster_epsilon_m);
    r.read("cluster_min_samples", pp.cluster_min_samples);
    r.read_enum("metric", pp.metric, parse_metric);
    r.read("window_seconds", pp.sequences.window_seconds);
    r.read("min_context", pp.sequences.min_context);
    r.finish();
  }
  if (const json* s = top.child("split")) {
    ObjectReader r(*s, "split");
    r.read_enum("mode", c.split.mode, mob::parse_split_mode);
    r.read("fraction", c.split.fraction);
    std::vector<double> ratios = {c.split.ratios.train,
                                  c.split.ratios.validation,
                                  c.split.ratios.test};
    r.read("ratios", ratios);
    if (ratios.size() != 3) {
      throw std::invalid_argument("config: split.ratios needs 3 values");
    }
    c.split.ratios = {ratios[0], ratios[1], ratios[2]};
    r.finish();
  }
  if (const json* t = top.child("text")) {
    ObjectReader r(*t, "text");
    r.read("kind", c.text.kind);
    r.read("dimension", c.text.dimension);
    r.read_path("path", c.text.path);
    r.finish();
  }
  if (const json* g = top.child("grid")) {
    grid_from_json(*g, "grid", c.pretrain.shape.grid);
  }
  if (const json* p = top.child("pretrain")) {
    ObjectReader r(*p, "pretrain");
    r.read("batch_size", c.pretrain.batch_size);
    r.read("temperature", c.pretrain.temperature);
    r.read("epochs", c.pretrain.epochs);
    r.read("learning_rate", c.pretrain.learning_rate);
    r.read("hidden", c.pretrain.shape.hidden);
    r.read("embedding_dim", c.pretrain.shape.embedding_dim);
    r.finish();
  }
  if (const json* s = top.child("skipgram")) {
    ObjectReader r(*s, "skipgram");
    r.read("dimension", c.skipgram.dimension);
    r.read("window", c.skipgram.window);
    r.read("negatives", c.skipgram.negatives);
    r.read("epochs", c.skipgram.epochs);
    r.read("batch_size", c.skipgram.batch_size);
    r.read("learning_rate", c.skipgram.learning_rate);
    r.finish();
  }
  if (const json* p = top.child("predictor")) {
    ObjectReader r(*p, "predictor");
    auto& pc = c.predictor;
    r.read("layers", pc.layers);
    r.read("heads", pc.heads);
    r.read("ff_dim", pc.ff_dim);
    r.read("dropout", pc.dropout);
    r.read("d_model", pc.d_model);
    r.read("max_context", pc.max_context);
    r.read("time_dim", pc.time_dim);
    r.read("dow_dim", pc.dow_dim);
    r.read("user_dim", pc.user_dim);
    r.read_enum("head", pc.head, pred::parse_head_kind);
    r.finish();
  }
  if (const json* t = top.child("train")) {
    ObjectReader r(*t, "train");
    r.read("batch_size", c.train.batch_size);
    r.read("max_epochs", c.train.max_epochs);
    r.read("patience", c.train.patience);
    r.read("learning_rate", c.train.learning_rate);
    r.read("chunk_size", c.train.chunk_size);
    bool parallel = c.train.exec == num::kernels::Exec::kParallel;
    r.read("parallel", parallel);
    c.train.exec =
        parallel ? num::kernels::Exec::kParallel : num::kernels::Exec::kSerial;
    r.finish();
  }
  if (j.is_object() && j.contains("embedders")) {
    std::vector<std::string> names;
    top.read("embedders", names);
    c.embedders.clear();
    for (const auto& n : names) c.embedders.push_back(pred::parse_embedder_kind(n));
  }
  top.read("seeds", c.seeds);
  top.read_path("output_dir", c.output_dir);
  top.finish();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("config: cannot open '" + path.string() + "'");
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument("config: " + path.string() + ": " + e.what());
  }
  ExperimentConfig c = config_from_json(j);
  const auto base = path.parent_path();
  auto resolve = [&](std::filesystem::path& p) {
    if (!p.empty() && p.is_relative()) p = base / p;
  };
  resolve(c.dataset.records);
  resolve(c.dataset.pois);
  resolve(c.text.path);
  resolve(c.output_dir);
  return c;
}

void save_config(const std::filesystem::path& path,
                 const ExperimentConfig& config) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("config: cannot write '" + path.string() + "'");
  }
  out << config_to_json(config).dump(2) << '\n';
}

}  // namespace locemb::pipeline
