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
#include <string>
#include <vector>

#include "locemb/num/tensor.h"

namespace locemb::eval {

struct Projection {
  // N x 2 coordinates on the first two principal components.
  num::Tensor coords;
  // d x 2 unit loadings; the largest-magnitude entry of each is positive.
  num::Tensor components;
  // Variance along each component and in total (divisor N - 1).
  double variance[2] = {0.0, 0.0};
  double total_variance = 0.0;
};

// PCA to two dimensions. When the centred data has rank below two, the
// missing components and coordinates are zero. Throws
// std::invalid_argument for fewer than three rows.
Projection project_2d(const num::Tensor& embeddings);

// Scatter plot; points with highlight[i] set are drawn red, others blue.
std::string projection_svg(const Projection& p,
                           const std::vector<bool>& highlight,
                           const std::string& title);
void write_projection(const std::filesystem::path& svg_path,
                      const std::filesystem::path& csv_path,
                      const Projection& p, const std::vector<std::string>& ids,
                      const std::vector<bool>& highlight,
                      const std::string& title);

}  // namespace locemb::eval
