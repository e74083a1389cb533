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
#include <string_view>
#include <vector>

#include "locemb/num/tensor.h"

namespace locemb::calliper {

// Frozen map from a description to a fixed-width feature vector. The
// embedder has no trainable state: identical text always gives an identical
// vector.
class TextEmbedder {
 public:
  virtual ~TextEmbedder() = default;

  virtual std::size_t dimension() const = 0;
  virtual std::vector<double> embed(std::string_view text) const = 0;
  // Short identifier stored in checkpoint metadata.
  virtual std::string kind() const = 0;

  // One row per text.
  num::Tensor embed_batch(std::span<const std::string> texts) const;
};

// Character trigram feature hashing. The text is lower-cased (ASCII) and
// wrapped in one space on each side; each trigram is hashed with 64-bit
// FNV-1a, bucket = hash % dimension, and the top hash bit selects a +1 or -1
// contribution. The count vector is L2-normalised (all-zero stays zero).
class HashedNgramEmbedder final : public TextEmbedder {
 public:
  explicit HashedNgramEmbedder(std::size_t dimension = 512);

  std::size_t dimension() const override { return dimension_; }
  std::vector<double> embed(std::string_view text) const override;
  std::string kind() const override;

 private:
  std::size_t dimension_;
};

std::uint64_t fnv1a64(std::string_view bytes);

// Vectors exported from an external sentence encoder, keyed by the exact
// description text. File format: comma-separated `text,f1,...,fd`, text
// quoted as needed.
class PrecomputedTextEmbedder final : public TextEmbedder {
 public:
  using Table = std::map<std::string, std::vector<double>, std::less<>>;

  explicit PrecomputedTextEmbedder(Table table);
  static PrecomputedTextEmbedder load(const std::filesystem::path& path);

  std::size_t dimension() const override { return dimension_; }
  // Throws std::invalid_argument naming the text when it has no vector.
  std::vector<double> embed(std::string_view text) const override;
  std::string kind() const override { return "precomputed"; }

  const Table& table() const noexcept { return table_; }

 private:
  Table table_;
  std::size_t dimension_ = 0;
};

}  // namespace locemb::calliper
