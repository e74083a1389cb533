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
#include <string>
#include <vector>

#include "locemb/num/kernels.h"
#include "locemb/pred/model.h"

namespace locemb::pred {

struct TrainOptions {
  std::size_t batch_size = 32;
  std::size_t max_epochs = 100;
  // Stop after this many epochs without a lower validation loss.
  std::size_t patience = 3;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  // Gradients are summed per chunk of this many sequences and the chunk
  // sums are added in chunk order, so results do not depend on the number
  // of threads.
  std::size_t chunk_size = 8;
  num::kernels::Exec exec = num::kernels::Exec::kParallel;

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct TrainReport {
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  double best_val_loss = 0.0;
  bool stopped_early = false;
};

// {"epoch":..,"train_loss":..,"val_loss":..}
std::string to_json_line(const EpochRecord& record);

using EpochLogger = std::function<void(const EpochRecord&)>;

// Minibatch Adam on mean cross entropy with early stopping on validation
// cross entropy; the parameters of the best epoch are restored at the end.
// A frozen embedder table is never changed. Throws std::invalid_argument
// when either split is empty.
TrainReport train(Predictor& model,
                  std::span<const mob::MobilitySequence> train_set,
                  std::span<const mob::MobilitySequence> validation_set,
                  const TrainOptions& options, const EpochLogger& log = {});

// Mean cross entropy of the targets in evaluation mode.
double mean_cross_entropy(const Predictor& model,
                          std::span<const mob::MobilitySequence> seqs,
                          num::kernels::Exec exec);

}  // namespace locemb::pred
