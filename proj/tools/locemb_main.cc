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


// locemb: preprocess, pretrain, train, evaluate, visualize and synth
// subcommands over one experiment config.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "locemb/eval/report.h"
#include "locemb/pipeline/config.h"
#include "locemb/pipeline/stages.h"

namespace {

using locemb::pipeline::ExperimentConfig;

struct CommonOptions {
  std::string config;
  std::string preset;
  std::string seeds;
  std::string out;
};

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    std::size_t used = 0;
    const auto v = std::stoull(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad seed '" + item + "'");
    seeds.push_back(v);
  }
  if (seeds.empty()) throw std::invalid_argument("--seed-override: no seeds");
  return seeds;
}

ExperimentConfig resolve(const CommonOptions& o) {
  if (o.config.empty() == o.preset.empty()) {
    throw std::invalid_argument("give exactly one of --config and --preset");
  }
  ExperimentConfig c = o.config.empty() ? locemb::pipeline::preset(o.preset)
                                        : locemb::pipeline::load_config(o.config);
  if (!o.seeds.empty()) c.seeds = parse_seed_list(o.seeds);
  if (!o.out.empty()) c.output_dir = o.out;
  return c;
}

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "Experiment config (JSON)");
  cmd->add_option("--preset", o.preset, "Start from a named preset instead");
  cmd->add_option("--seed-override", o.seeds,
                  "Comma-separated seeds replacing the config's list");
  cmd->add_option("--out", o.out, "Output directory");
}

void log_line(const std::string& msg) { std::cerr << msg << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Location embedding experiments"};
  app.require_subcommand(1);
  CommonOptions opts;
  std::size_t run = 0;

  auto* synth = app.add_subcommand("synth", "Write a synthetic city");
  auto* preprocess =
      app.add_subcommand("preprocess", "Build sequences and split manifests");
  auto* pretrain =
      app.add_subcommand("pretrain", "Build every run's location embedder");
  auto* train = app.add_subcommand("train", "Train the next-location models");
  auto* evaluate =
      app.add_subcommand("evaluate", "Score the test splits and write reports");
  auto* visualize =
      app.add_subcommand("visualize", "Project embeddings to 2-D SVG plots");
  auto* show = app.add_subcommand("config", "Print the resolved config");
  for (auto* cmd : {synth, preprocess, pretrain, train, evaluate, visualize, show}) {
    add_common(cmd, opts);
  }
  visualize->add_option("--run", run, "Run index to plot");

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig config = resolve(opts);
    namespace pl = locemb::pipeline;
    if (synth->parsed()) {
      std::cout << pl::cmd_synth(config).string() << '\n';
    } else if (preprocess->parsed()) {
      pl::cmd_preprocess(config, log_line);
    } else if (pretrain->parsed()) {
      pl::cmd_pretrain(config, log_line);
    } else if (train->parsed()) {
      pl::cmd_train(config, log_line);
    } else if (evaluate->parsed()) {
      const auto reports = pl::cmd_evaluate(config, log_line);
      std::cout << locemb::eval::format_table(reports);
    } else if (visualize->parsed()) {
      pl::cmd_visualize(config, run, log_line);
    } else if (show->parsed()) {
      std::cout << pl::config_to_json(config).dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
