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

#include "locemb/calliper/model.h"
#include "locemb/mob/location_index.h"
#include "locemb/num/tensor.h"

namespace locemb::pred {

enum class EmbedderKind { kCalliper, kLookup, kSkipgram };

std::string to_string(EmbedderKind kind);
EmbedderKind parse_embedder_kind(const std::string& text);

// Source of location vectors for the predictor. The table has one row per
// LocationIndex entry, in index order. A frozen handle is copied into the
// predictor as a constant; an unfrozen one is the initial value of a table
// trained jointly with the predictor.
struct EmbedderHandle {
  EmbedderKind kind = EmbedderKind::kLookup;
  bool frozen = false;
  num::Tensor table;
  // Fingerprint of the LocationIndex the rows follow.
  std::string index_fingerprint;

  std::size_t dimension() const { return table.cols(); }
  // Throws std::out_of_range for an unknown id.
  std::span<const double> lookup(const mob::LocationIndex& index,
                                 const std::string& id) const;
};

// Frozen handle built by running the location encoder on every location's
// centroid, including locations no training data ever mentioned.
EmbedderHandle calliper_embedder(const calliper::Model& model,
                                 const mob::LocationIndex& index);

// Table checkpoint with the LocationIndex ids and fingerprint in the
// metadata. Loading rejects a file written for a different index.
void save_embedding_table(const std::filesystem::path& path,
                          const EmbedderHandle& handle,
                          const mob::LocationIndex& index,
                          num::Metadata metadata = {});
EmbedderHandle load_embedding_table(const std::filesystem::path& path,
                                    const mob::LocationIndex& index,
                                    num::Metadata* metadata = nullptr);

}  // namespace locemb::pred
