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

#include "locemb/eval/report.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace locemb::eval {
namespace {

template <typename Field>
Summary summarize_field(const std::vector<RunMetrics>& runs, Field f) {
  std::vector<double> v;
  v.reserve(runs.size());
  for (const auto& r : runs) v.push_back(r.*f);
  return summarize(v);
}

nlohmann::json summary_json(Summary s) {
  return {{"mean", s.mean}, {"std", s.std}};
}

}  // namespace

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: no values");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() == 1) return {mean, 0.0};
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / static_cast<double>(values.size() - 1))};
}

Summary MetricsReport::acc1() const {
  return summarize_field(runs, &RunMetrics::acc1);
}
Summary MetricsReport::acc5() const {
  return summarize_field(runs, &RunMetrics::acc5);
}
Summary MetricsReport::acc10() const {
  return summarize_field(runs, &RunMetrics::acc10);
}
Summary MetricsReport::mrr() const {
  return summarize_field(runs, &RunMetrics::mrr);
}
Summary MetricsReport::ndcg10() const {
  return summarize_field(runs, &RunMetrics::ndcg10);
}

std::string to_json(const MetricsReport& report) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : report.runs) {
    runs.push_back({{"acc1", r.acc1},
                    {"acc5", r.acc5},
                    {"acc10", r.acc10},
                    {"mrr", r.mrr},
                    {"ndcg10", r.ndcg10}});
  }
  nlohmann::json j = {{"dataset", report.dataset},
                      {"split_mode", report.split_mode},
                      {"embedder", report.embedder},
                      {"targets", report.targets},
                      {"seeds", report.seeds},
                      {"samples", report.samples},
                      {"manifest_hashes", report.manifest_hashes},
                      {"runs", runs}};
  if (!report.runs.empty()) {
    j["summary"] = {{"acc1", summary_json(report.acc1())},
                    {"acc5", summary_json(report.acc5())},
                    {"acc10", summary_json(report.acc10())},
                    {"mrr", summary_json(report.mrr())},
                    {"ndcg10", summary_json(report.ndcg10())}};
  }
  return j.dump(2);
}

MetricsReport report_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  MetricsReport r;
  r.dataset = j.at("dataset").get<std::string>();
  r.split_mode = j.at("split_mode").get<std::string>();
  r.embedder = j.at("embedder").get<std::string>();
  r.targets = j.value("targets", std::string("all"));
  r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  r.samples = j.value("samples", std::vector<std::size_t>{});
  r.manifest_hashes = j.at("manifest_hashes").get<std::vector<std::string>>();
  for (const auto& run : j.at("runs")) {
    r.runs.push_back({run.at("acc1").get<double>(), run.at("acc5").get<double>(),
                      run.at("acc10").get<double>(), run.at("mrr").get<double>(),
                      run.at("ndcg10").get<double>()});
  }
  return r;
}

void write_report(const std::filesystem::path& path,
                  const MetricsReport& report) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("write_report: cannot open " + path.string());
  out << to_json(report) << '\n';
}

MetricsReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_report: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return report_from_json(buf.str());
}

double relative_difference(double ours, double best_other) {
  if (best_other == 0.0) {
    throw std::invalid_argument("relative_difference: reference value is 0");
  }
  return (ours - best_other) / best_other;
}

std::string format_table(std::span<const MetricsReport> reports) {
  std::string out =
      "embedder        split         targets Acc@1          Acc@5          Acc@10         "
      "MRR            nDCG@10\n";
  char buf[64];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof(buf), "%-15s %-13s %-7s", r.embedder.c_str(),
                  r.split_mode.c_str(), r.targets.c_str());
    out += buf;
    for (const Summary s : {r.acc1(), r.acc5(), r.acc10(), r.mrr(), r.ndcg10()}) {
      std::snprintf(buf, sizeof(buf), " %6.2f+-%-6.2f", 100.0 * s.mean,
                    100.0 * s.std);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace locemb::eval
