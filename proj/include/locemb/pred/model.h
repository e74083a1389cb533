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
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "locemb/mob/location_index.h"
#include "locemb/mob/types.h"
#include "locemb/num/checkpoint.h"
#include "locemb/num/kernels.h"
#include "locemb/num/tape.h"
#include "locemb/pred/embedder.h"

namespace locemb::pred {

// kFc: logits = h W + b over all classes.
// kTied: logits = (h W + b) E^T, scoring every class through its location
// embedding E (K x d_e), so classes never seen as targets still get
// informative scores when their embedding is.
enum class HeadKind { kFc, kTied };

std::string to_string(HeadKind kind);
HeadKind parse_head_kind(const std::string& text);

struct PredictorConfig {
  std::size_t layers = 6;
  std::size_t heads = 8;
  std::size_t ff_dim = 256;
  double dropout = 0.1;
  std::size_t d_model = 128;
  // Longer contexts keep their most recent visits.
  std::size_t max_context = 64;
  std::size_t time_dim = 16;
  std::size_t dow_dim = 8;
  std::size_t user_dim = 16;
  HeadKind head = HeadKind::kFc;

  // Throws std::invalid_argument when d_model is not divisible by heads or
  // a size is zero.
  void validate() const;

  friend bool operator==(const PredictorConfig&,
                         const PredictorConfig&) = default;
};

// A sequence mapped to class indices and time features.
struct EncodedSequence {
  std::vector<std::size_t> locations;
  std::vector<std::size_t> hours;
  std::vector<std::size_t> weekdays;
  std::size_t user = 0;
  std::size_t target = 0;
};

// Transformer next-location model. Each visit is represented by
// concat(location embedding, hour embedding, weekday embedding, user
// embedding), mapped to d_model by a linear layer, and summed with a
// sinusoidal position code. Post-norm causal encoder layers follow; the
// hidden state of the last position feeds the head. Users outside the
// vocabulary share row 0.
class Predictor {
 public:
  Predictor(const PredictorConfig& config, const EmbedderHandle& embedder,
            const mob::LocationIndex& index, std::vector<std::string> users,
            std::uint64_t seed);

  const PredictorConfig& config() const noexcept { return config_; }
  const mob::LocationIndex& index() const noexcept { return index_; }
  const std::vector<std::string>& users() const noexcept { return users_; }
  EmbedderKind embedder_kind() const noexcept { return embedder_kind_; }
  bool embedder_frozen() const noexcept { return embedder_frozen_; }
  std::size_t num_classes() const noexcept { return index_.size(); }

  num::ParameterStore& params() noexcept { return params_; }
  const num::ParameterStore& params() const noexcept { return params_; }
  // The location table in use (trained or frozen).
  const num::Tensor& embedding_table() const {
    return params_.value("emb.table");
  }

  // Truncates to the most recent max_context visits. Throws
  // std::out_of_range for unknown locations and std::invalid_argument for
  // an empty context.
  EncodedSequence encode(const mob::MobilitySequence& seq) const;

  // 1 x K logits.
  num::Var logits(num::Tape& tape, const EncodedSequence& seq) const;

  // Evaluation-mode probabilities over all classes.
  std::vector<double> forward(const mob::MobilitySequence& seq) const;
  // Class indices and probabilities, descending, ties by ascending index.
  std::vector<std::pair<std::size_t, double>> predict_ranked(
      const mob::MobilitySequence& seq) const;
  // One probability row per sequence. The parallel form distributes
  // sequences across threads and returns exactly the serial result.
  num::Tensor predict_batch(std::span<const mob::MobilitySequence> seqs,
                            num::kernels::Exec exec) const;

  void save(const std::filesystem::path& path,
            num::Metadata metadata = {}) const;
  // Throws std::runtime_error when the file is not a predictor checkpoint
  // or was trained against a different LocationIndex.
  static Predictor load(const std::filesystem::path& path,
                        const mob::LocationIndex& index,
                        num::Metadata* metadata = nullptr);

 private:
  Predictor() = default;

  PredictorConfig config_;
  mob::LocationIndex index_;
  std::vector<std::string> users_;
  std::map<std::string, std::size_t> user_rows_;
  EmbedderKind embedder_kind_ = EmbedderKind::kLookup;
  bool embedder_frozen_ = false;
  num::ParameterStore params_;
};

// Fixed sinusoidal position code, rows = positions.
num::Tensor positional_encoding(std::size_t length, std::size_t width);

}  // namespace locemb::pred
