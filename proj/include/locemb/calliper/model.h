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
#include <span>
#include <string>
#include <vector>

#include "locemb/geo/fcnet.h"
#include "locemb/geo/grid.h"
#include "locemb/num/checkpoint.h"
#include "locemb/num/tape.h"

namespace locemb::calliper {

struct ModelShape {
  geo::GridSpec grid;
  std::size_t hidden = 256;
  std::size_t embedding_dim = 128;
  std::size_t text_dim = 512;

  friend bool operator==(const ModelShape&, const ModelShape&) = default;
};

// Location encoder (grid encoding followed by FC-Net, parameters under
// "loc") and text projection (one linear layer d_T -> d, under "proj").
class Model {
 public:
  Model() = default;
  Model(const ModelShape& shape, num::Rng& rng);
  Model(const ModelShape& shape, num::ParameterStore params);

  const ModelShape& shape() const noexcept { return shape_; }
  const num::ParameterStore& params() const noexcept { return params_; }
  num::ParameterStore& params() noexcept { return params_; }

  num::Var encode_locations(num::Tape& tape,
                            std::span<const geo::GeoPoint> points) const;
  num::Var project_text(num::Tape& tape, num::Var text_features) const;

  // Evaluation-mode helpers, one row per input. Defined for any
  // coordinate, seen or not.
  num::Tensor encode_locations(std::span<const geo::GeoPoint> points) const;
  std::vector<double> encode_location(const geo::GeoPoint& p) const;
  num::Tensor embed_text(const num::Tensor& text_features) const;

  void save(const std::filesystem::path& path,
            num::Metadata metadata = {}) const;
  // Throws std::runtime_error when the file is not a location encoder
  // checkpoint.
  static Model load(const std::filesystem::path& path,
                    num::Metadata* metadata = nullptr);

 private:
  ModelShape shape_;
  num::ParameterStore params_;
};

}  // namespace locemb::calliper
