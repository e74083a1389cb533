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

#include "locemb/pred/embedder.h"

#include <stdexcept>

namespace locemb::pred {

std::string to_string(EmbedderKind kind) {
  switch (kind) {
    case EmbedderKind::kCalliper:
      return "calliper";
    case EmbedderKind::kLookup:
      return "vanilla-e2e";
    case EmbedderKind::kSkipgram:
      return "skipgram";
  }
  return "unknown";
}

EmbedderKind parse_embedder_kind(const std::string& text) {
  if (text == "calliper") return EmbedderKind::kCalliper;
  if (text == "vanilla-e2e" || text == "lookup") return EmbedderKind::kLookup;
  if (text == "skipgram") return EmbedderKind::kSkipgram;
  throw std::invalid_argument("unknown embedder kind '" + text + "'");
}

std::span<const double> EmbedderHandle::lookup(const mob::LocationIndex& index,
                                               const std::string& id) const {
  return table.row_span(index.index_of(id));
}

EmbedderHandle calliper_embedder(const calliper::Model& model,
                                 const mob::LocationIndex& index) {
  std::vector<geo::GeoPoint> points;
  points.reserve(index.size());
  for (const auto& loc : index.locations()) points.push_back(loc.centroid);
  EmbedderHandle h;
  h.kind = EmbedderKind::kCalliper;
  h.frozen = true;
  h.table = model.encode_locations(points);
  h.index_fingerprint = index.fingerprint();
  return h;
}

void save_embedding_table(const std::filesystem::path& path,
                          const EmbedderHandle& handle,
                          const mob::LocationIndex& index,
                          num::Metadata metadata) {
  if (handle.table.rows() != index.size()) {
    throw std::invalid_argument("save_embedding_table: table has " +
                                std::to_string(handle.table.rows()) +
                                " rows for " + std::to_string(index.size()) +
                                " locations");
  }
  std::string ids;
  for (const auto& loc : index.locations()) ids += loc.id + "\n";
  metadata["kind"] = "embedding-table";
  metadata["embedder"] = to_string(handle.kind);
  metadata["frozen"] = handle.frozen ? "1" : "0";
  metadata["location_ids"] = ids;
  metadata["location_index_sha256"] = index.fingerprint();
  num::ParameterStore store;
  store.add("table", handle.table, !handle.frozen);
  num::save_checkpoint(path, store, metadata);
}

EmbedderHandle load_embedding_table(const std::filesystem::path& path,
                                    const mob::LocationIndex& index,
                                    num::Metadata* metadata) {
  num::Checkpoint ck = num::load_checkpoint(path);
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = ck.metadata.find(key);
    if (it == ck.metadata.end()) {
      throw std::runtime_error(path.string() + ": missing '" + key + "'");
    }
    return it->second;
  };
  if (get("kind") != "embedding-table") {
    throw std::runtime_error(path.string() + " is not an embedding table");
  }
  if (get("location_index_sha256") != index.fingerprint()) {
    throw std::runtime_error(path.string() +
                             " was built for a different LocationIndex");
  }
  EmbedderHandle h;
  h.kind = parse_embedder_kind(get("embedder"));
  h.frozen = get("frozen") == "1";
  h.table = ck.params.value("table");
  h.index_fingerprint = index.fingerprint();
  if (metadata != nullptr) *metadata = ck.metadata;
  return h;
}

}  // namespace locemb::pred
