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
#include <functional>
#include <span>
#include <vector>

#include "locemb/calliper/model.h"
#include "locemb/calliper/text_embedder.h"
#include "locemb/mob/types.h"

namespace locemb::calliper {

struct PretrainConfig {
  std::size_t batch_size = 64;
  double temperature = 0.07;
  std::size_t epochs = 100;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  ModelShape shape;

  // Throws std::invalid_argument for batch_size < 2, tau <= 0, zero epochs
  // or a non-positive learning rate.
  void validate() const;
};

struct PretrainResult {
  Model model;
  // Mean InfoNCE per epoch, weighted by batch size.
  std::vector<double> epoch_losses;
};

// Called after every epoch with (epoch, mean loss).
using EpochCallback = std::function<void(std::size_t, double)>;

// Contrastive pretraining on (coordinate, description) pairs. Each epoch
// shuffles the corpus with a seed derived from (seed, epoch) and walks it
// in batches of batch_size; a trailing batch of one pair is skipped since
// it has no negatives. The text embedder is only read. Throws
// std::invalid_argument for fewer than two POIs or when shape.text_dim
// differs from the embedder's dimension.
PretrainResult pretrain(std::span<const mob::PoiRecord> pois,
                        const TextEmbedder& text, const PretrainConfig& config,
                        const EpochCallback& on_epoch = {});

}  // namespace locemb::calliper
