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

#include "locemb/calliper/model.h"

#include <cstdio>
#include <stdexcept>

#include "locemb/num/layers.h"
#include "locemb/num/ops.h"

namespace locemb::calliper {
namespace {

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const std::string& field(const num::Metadata& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) {
    throw std::runtime_error("location encoder checkpoint lacks '" + key + "'");
  }
  return it->second;
}

}  // namespace

Model::Model(const ModelShape& shape, num::Rng& rng) : shape_(shape) {
  shape_.grid.validate();
  geo::init_fcnet(params_, "loc",
                  {shape.grid.encoding_size(), shape.hidden,
                   shape.embedding_dim},
                  rng);
  num::init_linear(params_, "proj", shape.text_dim, shape.embedding_dim, rng);
}

Model::Model(const ModelShape& shape, num::ParameterStore params)
    : shape_(shape), params_(std::move(params)) {
  shape_.grid.validate();
  const auto fc = geo::fcnet_shape(params_, "loc");
  if (fc.input != shape.grid.encoding_size() || fc.hidden != shape.hidden ||
      fc.output != shape.embedding_dim ||
      params_.value("proj.w").rows() != shape.text_dim ||
      params_.value("proj.w").cols() != shape.embedding_dim) {
    throw std::invalid_argument("calliper::Model: parameters do not match "
                                "the declared shape");
  }
}

num::Var Model::encode_locations(num::Tape& tape,
                                 std::span<const geo::GeoPoint> points) const {
  num::Var pe = tape.constant(geo::grid_pe_batch(points, shape_.grid));
  return geo::fcnet_forward(tape, params_, "loc", pe);
}

num::Var Model::project_text(num::Tape& tape, num::Var text_features) const {
  return num::linear(tape, params_, "proj", text_features);
}

num::Tensor Model::encode_locations(
    std::span<const geo::GeoPoint> points) const {
  num::Tape tape;
  return encode_locations(tape, points).value();
}

std::vector<double> Model::encode_location(const geo::GeoPoint& p) const {
  return encode_locations(std::span<const geo::GeoPoint>(&p, 1)).storage();
}

num::Tensor Model::embed_text(const num::Tensor& text_features) const {
  num::Tape tape;
  return project_text(tape, tape.constant(text_features)).value();
}

void Model::save(const std::filesystem::path& path,
                 num::Metadata metadata) const {
  metadata["kind"] = "calliper";
  metadata["grid.min_radius"] = exact(shape_.grid.min_radius);
  metadata["grid.max_radius"] = exact(shape_.grid.max_radius);
  metadata["grid.scales"] = std::to_string(shape_.grid.scales);
  metadata["hidden"] = std::to_string(shape_.hidden);
  metadata["embedding_dim"] = std::to_string(shape_.embedding_dim);
  metadata["text_dim"] = std::to_string(shape_.text_dim);
  num::save_checkpoint(path, params_, metadata);
}

Model Model::load(const std::filesystem::path& path,
                  num::Metadata* metadata) {
  num::Checkpoint ck = num::load_checkpoint(path);
  if (field(ck.metadata, "kind") != "calliper") {
    throw std::runtime_error(path.string() +
                             " is not a location encoder checkpoint");
  }
  ModelShape shape;
  shape.grid.min_radius = std::stod(field(ck.metadata, "grid.min_radius"));
  shape.grid.max_radius = std::stod(field(ck.metadata, "grid.max_radius"));
  shape.grid.scales = std::stoi(field(ck.metadata, "grid.scales"));
  shape.hidden = std::stoul(field(ck.metadata, "hidden"));
  shape.embedding_dim = std::stoul(field(ck.metadata, "embedding_dim"));
  shape.text_dim = std::stoul(field(ck.metadata, "text_dim"));
  if (metadata != nullptr) *metadata = ck.metadata;
  return Model(shape, std::move(ck.params));
}

}  // namespace locemb::calliper
