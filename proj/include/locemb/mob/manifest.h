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

#include "locemb/mob/splits.h"

namespace locemb::mob {

// Replayable description of a split: sequence ids per part, the held-out
// location set and seed, and hashes of the inputs. Stored as JSON; the
// content_sha256 field covers every other field and is checked on read.
//
// {
//   "format": "locemb-split-manifest", "version": 1,
//   "mode": "inductive", "seed": 17, "fraction": 0.1,
//   "new_locations": [...], "train": [ids], "validation": [ids],
//   "test": [ids], "sequences_sha256": "...",
//   "location_index_sha256": "...", "content_sha256": "..."
// }
struct SplitManifest {
  SplitMode mode = SplitMode::kConventional;
  std::uint64_t seed = 0;
  double fraction = 0.0;
  std::set<std::string> new_locations;
  std::vector<std::uint64_t> train;
  std::vector<std::uint64_t> validation;
  std::vector<std::uint64_t> test;
  std::string sequences_sha256;
  std::string location_index_sha256;
  std::string content_sha256;
};

SplitManifest make_manifest(const DatasetSplit& split,
                            const std::string& sequences_sha256,
                            const std::string& location_index_sha256);

// Serialised form with content_sha256 filled in.
std::string manifest_to_json(const SplitManifest& manifest);
void write_manifest(const std::filesystem::path& path,
                    const SplitManifest& manifest);
// Throws std::runtime_error when the stored content hash does not match.
SplitManifest read_manifest(const std::filesystem::path& path);

// Rebuilds the split from the full sequence list. Throws when an id is
// missing or when the sequences hash differs from the manifest.
DatasetSplit apply_manifest(const SplitManifest& manifest,
                            std::span<const MobilitySequence> sequences);

}  // namespace locemb::mob
