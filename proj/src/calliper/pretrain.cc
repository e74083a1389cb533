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

#include "locemb/calliper/pretrain.h"

#include <numeric>
#include <stdexcept>

#include "locemb/calliper/infonce.h"
#include "locemb/num/adam.h"

namespace locemb::calliper {

void PretrainConfig::validate() const {
  if (batch_size < 2) {
    throw std::invalid_argument("pretrain: batch size must be at least 2");
  }
  if (!(temperature > 0.0)) {
    throw std::invalid_argument("pretrain: temperature must be positive");
  }
  if (epochs == 0 || !(learning_rate > 0.0)) {
    throw std::invalid_argument(
        "pretrain: epochs and learning rate must be positive");
  }
  shape.grid.validate();
}

PretrainResult pretrain(std::span<const mob::PoiRecord> pois,
                        const TextEmbedder& text, const PretrainConfig& config,
                        const EpochCallback& on_epoch) {
  config.validate();
  if (pois.size() < 2) {
    throw std::invalid_argument("pretrain: need at least two POIs, got " +
                                std::to_string(pois.size()));
  }
  if (config.shape.text_dim != text.dimension()) {
    throw std::invalid_argument(
        "pretrain: text dimension " + std::to_string(text.dimension()) +
        " does not match model text_dim " +
        std::to_string(config.shape.text_dim));
  }

  // Text features never change, so they are computed once.
  std::vector<std::string> descriptions;
  descriptions.reserve(pois.size());
  for (const auto& p : pois) descriptions.push_back(p.description);
  const num::Tensor features = text.embed_batch(descriptions);

  num::Rng init_rng(num::mix_seed(config.seed, 0x1001));
  PretrainResult result{Model(config.shape, init_rng), {}};
  num::Adam adam({.learning_rate = config.learning_rate});

  std::vector<std::size_t> order(pois.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t tdim = features.cols();
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    num::Rng rng(num::mix_seed(config.seed, epoch + 1));
    rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    std::size_t counted = 0;
    for (std::size_t begin = 0; begin < order.size();
         begin += config.batch_size) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      const std::size_t n = end - begin;
      if (n < 2) continue;
      std::vector<geo::GeoPoint> points(n);
      num::Tensor batch_text = num::Tensor::matrix(n, tdim);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = order[begin + i];
        points[i] = pois[k].point;
        std::copy(features.row_span(k).begin(), features.row_span(k).end(),
                  batch_text.row_span(i).begin());
      }
      num::Tape tape(num::Tape::Mode::kTrain);
      num::Var z_l = result.model.encode_locations(tape, points);
      num::Var z_t =
          result.model.project_text(tape, tape.constant(std::move(batch_text)));
      num::Var loss = infonce_loss(z_l, z_t, config.temperature);
      tape.backward(loss);
      tape.accumulate_gradients(result.model.params());
      adam.step(result.model.params());
      loss_sum += loss.value().item() * static_cast<double>(n);
      counted += n;
    }
    const double mean = loss_sum / static_cast<double>(counted);
    result.epoch_losses.push_back(mean);
    if (on_epoch) on_epoch(epoch, mean);
  }
  return result;
}

}  // namespace locemb::calliper
