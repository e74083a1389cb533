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

#include "locemb/calliper/text_embedder.h"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "locemb/mob/csv.h"

namespace locemb::calliper {

num::Tensor TextEmbedder::embed_batch(std::span<const std::string> texts) const {
  num::Tensor out = num::Tensor::matrix(texts.size(), dimension());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const auto v = embed(texts[i]);
    std::copy(v.begin(), v.end(), out.row_span(i).begin());
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

HashedNgramEmbedder::HashedNgramEmbedder(std::size_t dimension)
    : dimension_(dimension) {
  if (dimension == 0) {
    throw std::invalid_argument("HashedNgramEmbedder: dimension must be > 0");
  }
}

std::string HashedNgramEmbedder::kind() const {
  return "hashed-ngram:" + std::to_string(dimension_);
}

std::vector<double> HashedNgramEmbedder::embed(std::string_view text) const {
  std::string padded = " ";
  for (char c : text) {
    padded += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  }
  padded += ' ';
  std::vector<double> v(dimension_, 0.0);
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    const std::uint64_t h = fnv1a64(std::string_view(padded).substr(i, 3));
    v[h % dimension_] += (h >> 63) ? -1.0 : 1.0;
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
  }
  return v;
}

PrecomputedTextEmbedder::PrecomputedTextEmbedder(Table table)
    : table_(std::move(table)) {
  if (table_.empty()) {
    throw std::invalid_argument("PrecomputedTextEmbedder: empty table");
  }
  dimension_ = table_.begin()->second.size();
  for (const auto& [text, vec] : table_) {
    if (vec.size() != dimension_ || dimension_ == 0) {
      throw std::invalid_argument(
          "PrecomputedTextEmbedder: inconsistent vector width for '" + text +
          "'");
    }
  }
}

PrecomputedTextEmbedder PrecomputedTextEmbedder::load(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("PrecomputedTextEmbedder: cannot open " +
                             path.string());
  }
  Table table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      const auto fields = mob::split_csv_line(line);
      if (fields.size() < 2) throw std::invalid_argument("no vector values");
      std::vector<double> v;
      for (std::size_t i = 1; i < fields.size(); ++i) {
        v.push_back(mob::parse_double(fields[i]));
      }
      table[fields[0]] = std::move(v);
    } catch (const std::invalid_argument& e) {
      throw mob::ParseError(path.string(), line_no, e.what());
    }
  }
  return PrecomputedTextEmbedder(std::move(table));
}

std::vector<double> PrecomputedTextEmbedder::embed(
    std::string_view text) const {
  auto it = table_.find(text);
  if (it == table_.end()) {
    throw std::invalid_argument("no precomputed text vector for '" +
                                std::string(text) + "'");
  }
  return it->second;
}

}  // namespace locemb::calliper
