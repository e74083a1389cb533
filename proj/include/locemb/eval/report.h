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
#include <span>
#include <string>
#include <vector>

#include "locemb/eval/metrics.h"

namespace locemb::eval {

struct Summary {
  double mean = 0.0;
  // Sample standard deviation (n - 1); 0 for a single run.
  double std = 0.0;
};

// Throws std::invalid_argument on empty input.
Summary summarize(std::span<const double> values);

struct MetricsReport {
  std::string dataset;
  std::string split_mode;
  std::string embedder;
  // Which test samples were scored: "all", or "new" for the samples whose
  // target is a held-out location.
  std::string targets = "all";
  std::vector<std::uint64_t> seeds;
  // Number of scored samples in each run.
  std::vector<std::size_t> samples;
  // Content hash of the split manifest behind each run.
  std::vector<std::string> manifest_hashes;
  std::vector<RunMetrics> runs;

  Summary acc1() const;
  Summary acc5() const;
  Summary acc10() const;
  Summary mrr() const;
  Summary ndcg10() const;
};

// Machine-readable report. Stored values are fractions; the x100 scaling
// only happens in format_table.
std::string to_json(const MetricsReport& report);
MetricsReport report_from_json(const std::string& text);
void write_report(const std::filesystem::path& path,
                  const MetricsReport& report);
MetricsReport read_report(const std::filesystem::path& path);

// (ours - best_other) / best_other.
double relative_difference(double ours, double best_other);

// Plain-text table of mean +- std (x100) per report, one row each.
std::string format_table(std::span<const MetricsReport> reports);

}  // namespace locemb::eval
