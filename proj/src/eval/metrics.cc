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

#include "locemb/eval/metrics.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace locemb::eval {
namespace {

void check(std::span<const std::size_t> ranks) {
  if (ranks.empty()) throw std::invalid_argument("metrics: no ranks");
  for (std::size_t r : ranks) {
    if (r == 0) throw std::invalid_argument("metrics: ranks are 1-based");
  }
}

void check_k(std::size_t k) {
  if (k == 0) throw std::invalid_argument("metrics: k must be at least 1");
}

}  // namespace

std::size_t rank_of(std::span<const double> scores, std::size_t target) {
  if (target >= scores.size()) {
    throw std::out_of_range("rank_of: target " + std::to_string(target) +
                            " outside " + std::to_string(scores.size()) +
                            " classes");
  }
  const double t = scores[target];
  std::size_t rank = 1;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (scores[k] > t || (k < target && scores[k] == t)) ++rank;
  }
  return rank;
}

std::vector<std::size_t> ranks(const num::Tensor& scores,
                               std::span<const std::size_t> targets,
                               num::kernels::Exec exec) {
  if (scores.rows() != targets.size()) {
    throw std::invalid_argument("ranks: " + std::to_string(scores.rows()) +
                                " score rows for " +
                                std::to_string(targets.size()) + " targets");
  }
  std::vector<std::size_t> out(targets.size());
  const auto n = static_cast<std::ptrdiff_t>(targets.size());
  for (std::size_t t : targets) {
    if (t >= scores.cols()) throw std::out_of_range("ranks: target out of range");
  }
  if (exec == num::kernels::Exec::kParallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto r = static_cast<std::size_t>(i);
      out[r] = rank_of(scores.row_span(r), targets[r]);
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto r = static_cast<std::size_t>(i);
      out[r] = rank_of(scores.row_span(r), targets[r]);
    }
  }
  return out;
}

double acc_at_k(std::span<const std::size_t> ranks, std::size_t k) {
  check(ranks);
  check_k(k);
  std::size_t hits = 0;
  for (std::size_t r : ranks) hits += r <= k;
  return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

double mrr(std::span<const std::size_t> ranks) {
  check(ranks);
  double sum = 0.0;
  for (std::size_t r : ranks) sum += 1.0 / static_cast<double>(r);
  return sum / static_cast<double>(ranks.size());
}

double ndcg_at_k(std::span<const std::size_t> ranks, std::size_t k) {
  check_k(k);
  check(ranks);
  double sum = 0.0;
  for (std::size_t r : ranks) {
    if (r <= k) sum += 1.0 / std::log2(static_cast<double>(r) + 1.0);
  }
  return sum / static_cast<double>(ranks.size());
}

RunMetrics RunMetrics::from_ranks(std::span<const std::size_t> ranks) {
  return {acc_at_k(ranks, 1), acc_at_k(ranks, 5), acc_at_k(ranks, 10),
          eval::mrr(ranks), ndcg_at_k(ranks, 10)};
}

}  // namespace locemb::eval
