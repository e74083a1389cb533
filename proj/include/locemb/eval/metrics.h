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

#include <span>
#include <vector>

#include "locemb/num/kernels.h"
#include "locemb/num/tensor.h"

namespace locemb::eval {

// 1-based position of `target` when classes are sorted by descending score
// with ties broken by ascending class index:
//   1 + #{k : s_k > s_t} + #{k < t : s_k == s_t}
std::size_t rank_of(std::span<const double> scores, std::size_t target);

// One rank per row of scores. The parallel form splits rows across threads
// and returns exactly the serial result.
std::vector<std::size_t> ranks(const num::Tensor& scores,
                               std::span<const std::size_t> targets,
                               num::kernels::Exec exec);

// All of these throw std::invalid_argument on empty input, a zero rank or
// k < 1.
double acc_at_k(std::span<const std::size_t> ranks, std::size_t k);
// Mean reciprocal rank over the untruncated ranks.
double mrr(std::span<const std::size_t> ranks);
// Binary relevance with one relevant item: 1/log2(rank+1) inside the
// cut-off, else 0.
double ndcg_at_k(std::span<const std::size_t> ranks, std::size_t k = 10);

struct RunMetrics {
  double acc1 = 0.0;
  double acc5 = 0.0;
  double acc10 = 0.0;
  double mrr = 0.0;
  double ndcg10 = 0.0;

  static RunMetrics from_ranks(std::span<const std::size_t> ranks);
  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

}  // namespace locemb::eval
