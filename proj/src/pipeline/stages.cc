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


#include "locemb/pipeline/stages.h"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "locemb/calliper/pretrain.h"
#include "locemb/eval/projection.h"
#include "locemb/mob/csv.h"
#include "locemb/mob/hash.h"
#include "locemb/mob/pois.h"
#include "locemb/mob/sequences.h"
#include "locemb/mob/synth.h"
#include "locemb/pred/train.h"

namespace locemb::pipeline {
namespace {

namespace fs = std::filesystem;

void say(const Logger& log, const std::string& msg) {
  if (log) log(msg);
}

void require(const fs::path& p, const char* produced_by) {
  if (!fs::exists(p)) {
    throw std::runtime_error("missing artifact '" + p.string() + "'; run `" +
                             produced_by + "` first");
  }
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

std::vector<std::vector<std::string>> read_rows(const fs::path& path,
                                                std::size_t fields,
                                                const char* header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.starts_with(header)) continue;
    auto row = mob::split_csv_line(line);
    if (row.size() != fields) {
      throw mob::ParseError(path.string(), line_no,
                            "expected " + std::to_string(fields) + " fields");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::size_t expected_splits(const ExperimentConfig& config) {
  return config.split.mode == mob::SplitMode::kConventional
             ? 1
             : config.seeds.size();
}

void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
  auto out = open_out(path);
  for (const auto& l : lines) out << l << '\n';
}

std::string loss_line(std::size_t epoch, double loss) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "{\"epoch\":%zu,\"loss\":%.17g}", epoch,
                loss);
  return buf;
}

}  // namespace

fs::path Layout::split(std::size_t i) const {
  return root / "splits" / ("split_" + std::to_string(i) + ".json");
}

fs::path Layout::table(pred::EmbedderKind kind, std::size_t run) const {
  return root / "models" /
         (pred::to_string(kind) + "_run" + std::to_string(run) + ".table");
}

fs::path Layout::encoder(std::size_t run) const {
  return root / "models" / ("calliper_run" + std::to_string(run) + ".encoder");
}

fs::path Layout::predictor(pred::EmbedderKind kind, std::size_t run) const {
  return root / "models" /
         ("predictor_" + pred::to_string(kind) + "_run" + std::to_string(run) +
          ".ckpt");
}

fs::path Layout::log(const std::string& stage, pred::EmbedderKind kind,
                     std::size_t run) const {
  return root / "logs" /
         (stage + "_" + pred::to_string(kind) + "_run" + std::to_string(run) +
          ".jsonl");
}

fs::path Layout::report(const eval::MetricsReport& report) const {
  std::string name = report.embedder + "_" + report.split_mode;
  if (report.targets != "all") name += "_" + report.targets;
  return root / "reports" / (name + ".json");
}

fs::path Layout::figure(pred::EmbedderKind kind, std::size_t run,
                        const std::string& ext) const {
  return root / "figures" /
         (pred::to_string(kind) + "_run" + std::to_string(run) + "." + ext);
}

void write_locations(const fs::path& path, const mob::LocationIndex& index) {
  auto out = open_out(path);
  out << "id,x,y,description\n";
  char num[64];
  for (const auto& loc : index.locations()) {
    std::snprintf(num, sizeof(num), ",%.17g,%.17g,", loc.centroid.x,
                  loc.centroid.y);
    out << mob::csv_field(loc.id) << num << mob::csv_field(loc.description)
        << '\n';
  }
}

mob::LocationIndex read_locations(const fs::path& path) {
  std::vector<mob::Location> locs;
  for (const auto& row : read_rows(path, 4, "id")) {
    mob::Location loc;
    loc.id = row[0];
    loc.centroid = {mob::parse_double(row[1]), mob::parse_double(row[2])};
    loc.description = row[3];
    locs.push_back(std::move(loc));
  }
  return mob::LocationIndex(std::move(locs));
}

void write_categories(const fs::path& path,
                      const std::map<std::string, std::size_t>& categories) {
  auto out = open_out(path);
  out << "location,category\n";
  for (const auto& [id, c] : categories) {
    out << mob::csv_field(id) << ',' << c << '\n';
  }
}

std::map<std::string, std::size_t> read_categories(const fs::path& path) {
  std::map<std::string, std::size_t> out;
  for (const auto& row : read_rows(path, 2, "location")) {
    out[row[0]] = static_cast<std::size_t>(std::stoull(row[1]));
  }
  return out;
}

Artifacts load_artifacts(const ExperimentConfig& config) {
  const Layout layout{config.output_dir};
  for (const auto& p : {layout.locations(), layout.sequences(), layout.pois()}) {
    require(p, "preprocess");
  }
  Artifacts a;
  a.data.index = read_locations(layout.locations());
  a.data.sequences = mob::read_sequences(layout.sequences());
  a.data.pois = mob::load_pois(layout.pois());
  if (fs::exists(layout.categories())) {
    a.data.categories = read_categories(layout.categories());
  }
  const auto fingerprint = a.data.index.fingerprint();
  for (std::size_t i = 0; i < expected_splits(config); ++i) {
    require(layout.split(i), "preprocess");
    auto m = mob::read_manifest(layout.split(i));
    if (m.location_index_sha256 != fingerprint) {
      throw std::runtime_error("split manifest " + layout.split(i).string() +
                               " was written for a different LocationIndex");
    }
    if (m.mode != config.split.mode) {
      throw std::runtime_error("split manifest " + layout.split(i).string() +
                               " has mode " + mob::to_string(m.mode));
    }
    if (m.mode == mob::SplitMode::kInductive && m.seed != config.seeds[i]) {
      throw std::runtime_error("split manifest " + layout.split(i).string() +
                               " was drawn with seed " +
                               std::to_string(m.seed) + ", config has " +
                               std::to_string(config.seeds[i]));
    }
    a.splits.push_back(mob::apply_manifest(m, a.data.sequences));
    a.manifests.push_back(std::move(m));
  }
  return a;
}

fs::path cmd_synth(const ExperimentConfig& config) {
  const Layout layout{config.output_dir};
  const auto city = mob::generate_synthetic_city(config.dataset.synth);
  mob::write_synthetic_city(city, layout.raw_dir());
  write_categories(layout.raw_dir() / "categories.csv", city.category_of);
  return layout.raw_dir();
}

void cmd_preprocess(const ExperimentConfig& config, const Logger& log) {
  config.validate(true);
  const Layout layout{config.output_dir};
  const auto data = prepare_data(config);
  const auto splits = make_splits(config, data);
  const auto manifests = make_manifests(data, splits);
  write_locations(layout.locations(), data.index);
  mob::write_pois(layout.pois(), data.pois);
  if (!data.categories.empty()) {
    write_categories(layout.categories(), data.categories);
  }
  mob::write_sequences(layout.sequences(), data.sequences);
  fs::create_directories(layout.split(0).parent_path());
  for (std::size_t i = 0; i < manifests.size(); ++i) {
    mob::write_manifest(layout.split(i), manifests[i]);
  }
  say(log, "preprocess: " + std::to_string(data.index.size()) +
               " locations, " + std::to_string(data.sequences.size()) +
               " sequences, " + std::to_string(manifests.size()) +
               " split manifest(s)");
}

void cmd_pretrain(const ExperimentConfig& config, const Logger& log) {
  config.validate(false);
  const Layout layout{config.output_dir};
  const auto a = load_artifacts(config);
  for (std::size_t run = 0; run < config.runs(); ++run) {
    const auto& split = split_for_run(a.splits, run);
    for (auto kind : config.embedders) {
      const auto emb = build_embedder(kind, config, a.data, split,
                                      config.seeds[run], log);
      fs::create_directories(layout.table(kind, run).parent_path());
      num::Metadata meta = {{"seed", std::to_string(config.seeds[run])},
                            {"run", std::to_string(run)}};
      pred::save_embedding_table(layout.table(kind, run), emb.handle,
                                 a.data.index, meta);
      if (emb.model) {
        meta["text"] = config.text.kind;
        emb.model->save(layout.encoder(run), meta);
      }
      std::vector<std::string> lines;
      for (std::size_t e = 0; e < emb.losses.size(); ++e) {
        lines.push_back(loss_line(e + 1, emb.losses[e]));
      }
      write_lines(layout.log("pretrain", kind, run), lines);
      say(log, "pretrain: wrote " + layout.table(kind, run).string());
    }
  }
}

void cmd_train(const ExperimentConfig& config, const Logger& log) {
  config.validate(false);
  const Layout layout{config.output_dir};
  const auto a = load_artifacts(config);
  for (std::size_t run = 0; run < config.runs(); ++run) {
    const auto& split = split_for_run(a.splits, run);
    const auto seed = stage_seed(config.seeds[run], Stage::kPredictor);
    for (auto kind : config.embedders) {
      require(layout.table(kind, run), "pretrain");
      const auto handle =
          pred::load_embedding_table(layout.table(kind, run), a.data.index);
      pred::Predictor model(config.predictor, handle, a.data.index,
                            train_users(split), seed);
      auto opts = config.train;
      opts.seed = seed;
      std::vector<std::string> lines;
      const auto report = pred::train(
          model, split.train, split.validation, opts,
          [&](const pred::EpochRecord& e) {
            lines.push_back(pred::to_json_line(e));
          });
      write_lines(layout.log("train", kind, run), lines);
      model.save(layout.predictor(kind, run),
                 {{"seed", std::to_string(config.seeds[run])},
                  {"run", std::to_string(run)},
                  {"best_epoch", std::to_string(report.best_epoch)}});
      say(log, "train: wrote " + layout.predictor(kind, run).string());
    }
  }
}

std::vector<eval::MetricsReport> cmd_evaluate(const ExperimentConfig& config,
                                              const Logger& log) {
  config.validate(false);
  const Layout layout{config.output_dir};
  const auto a = load_artifacts(config);
  std::vector<RunRecord> runs;
  for (std::size_t run = 0; run < config.runs(); ++run) {
    const std::size_t s = a.splits.size() == 1 ? 0 : run;
    for (auto kind : config.embedders) {
      require(layout.predictor(kind, run), "train");
      const auto model =
          pred::Predictor::load(layout.predictor(kind, run), a.data.index);
      if (model.embedder_kind() != kind) {
        throw std::runtime_error(layout.predictor(kind, run).string() +
                                 " holds a " +
                                 pred::to_string(model.embedder_kind()) +
                                 " predictor");
      }
      RunRecord rec;
      rec.run = run;
      rec.seed = config.seeds[run];
      rec.kind = kind;
      rec.manifest_hash = a.manifests[s].content_sha256;
      rec.evaluation = evaluate(model, a.splits[s], config.train.exec);
      runs.push_back(std::move(rec));
    }
  }
  std::vector<eval::MetricsReport> reports;
  fs::create_directories(layout.summary_table().parent_path());
  for (auto kind : config.embedders) {
    for (auto& r : build_reports(config, kind, runs)) {
      eval::write_report(layout.report(r), r);
      say(log, "evaluate: wrote " + layout.report(r).string());
      reports.push_back(std::move(r));
    }
  }
  write_lines(layout.summary_table(), {eval::format_table(reports)});
  return reports;
}

void cmd_visualize(const ExperimentConfig& config, std::size_t run,
                   const Logger& log) {
  config.validate(false);
  if (run >= config.runs()) {
    throw std::invalid_argument("visualize: run " + std::to_string(run) +
                                " out of range");
  }
  const Layout layout{config.output_dir};
  const auto a = load_artifacts(config);
  const auto& split = split_for_run(a.splits, run);
  std::vector<std::string> ids;
  std::vector<bool> highlight;
  for (const auto& loc : a.data.index.locations()) {
    ids.push_back(loc.id);
    highlight.push_back(split.new_locations.contains(loc.id));
  }
  for (auto kind : config.embedders) {
    num::Tensor table;
    if (fs::exists(layout.predictor(kind, run))) {
      table = pred::Predictor::load(layout.predictor(kind, run), a.data.index)
                  .embedding_table();
    } else {
      require(layout.table(kind, run), "pretrain");
      table = pred::load_embedding_table(layout.table(kind, run), a.data.index)
                  .table;
    }
    const auto p = eval::project_2d(table);
    fs::create_directories(layout.figure(kind, run, "svg").parent_path());
    eval::write_projection(layout.figure(kind, run, "svg"),
                           layout.figure(kind, run, "csv"), p, ids, highlight,
                           pred::to_string(kind) + " run " +
                               std::to_string(run));
    say(log, "visualize: wrote " + layout.figure(kind, run, "svg").string());
  }
}

}  // namespace locemb::pipeline
