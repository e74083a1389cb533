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
#include <span>
#include <utility>
#include <vector>

#include "locemb/mob/location_index.h"
#include "locemb/num/parameter_store.h"
#include "locemb/pred/embedder.h"

namespace locemb::baselines {

struct SkipgramOptions {
  std::size_t dimension = 128;
  std::size_t window = 2;
  std::size_t negatives = 5;
  std::size_t epochs = 10;
  std::size_t batch_size = 128;
  double learning_rate = 0.01;
  std::uint64_t seed = 0;

  void validate() const;
};

using Sentence = std::vector<std::size_t>;

// One sentence per user: every distinct visit (time, location) mentioned in
// the sequences' contexts and targets, in time order, as class indices.
std::vector<Sentence> user_sentences(
    std::span<const mob::MobilitySequence> sequences,
    const mob::LocationIndex& index);

// (center, context) pairs for every position and every neighbour within
// the window, in sentence order.
std::vector<std::pair<std::size_t, std::size_t>> skipgram_pairs(
    const Sentence& sentence, std::size_t window);

struct SgnsExample {
  std::size_t center = 0;
  std::size_t context = 0;
  std::vector<std::size_t> negatives;
};

// Mean negative-sampling loss over the examples, using input vectors
// "in" and output vectors "out" (V x d each):
//   -log s(u_c . v_o) - sum_k log s(-u_c . v_k)
// When grads is true the gradients of that mean are added to the store's
// gradient buffers.
double sgns_loss(num::ParameterStore& store,
                 std::span<const SgnsExample> examples, bool grads);

struct SkipgramResult {
  // Frozen handle holding the input vectors.
  pred::EmbedderHandle handle;
  num::Tensor output_vectors;
  std::vector<double> epoch_losses;
  // Class indices that occur in the corpus.
  std::vector<std::size_t> vocabulary;
};

// Skip-gram with negative sampling on the users' visit sentences.
// Negatives follow unigram frequency^0.75 over the corpus vocabulary; a
// negative equal to the positive context is redrawn. Input vectors start
// uniform in (-0.5/d, 0.5/d), output vectors at zero; Adam updates only
// rows with non-zero gradient history, so rows of locations absent from the
// corpus keep their initial values. Throws std::invalid_argument when the
// corpus has fewer than two distinct locations.
SkipgramResult skipgram_pretrain(std::span<const Sentence> sentences,
                                 const mob::LocationIndex& index,
                                 const SkipgramOptions& options);

SkipgramResult skipgram_pretrain(
    std::span<const mob::MobilitySequence> sequences,
    const mob::LocationIndex& index, const SkipgramOptions& options);

}  // namespace locemb::baselines
