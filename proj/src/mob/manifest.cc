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

#include "locemb/mob/manifest.h"

#include <fstream>
#include <iterator>
#include <json.hpp>
#include <stdexcept>
#include <unordered_map>

#include "locemb/mob/hash.h"
#include "locemb/mob/sequences.h"

namespace locemb::mob {
namespace {

std::vector<std::uint64_t> ids_of(std::span<const MobilitySequence> seqs) {
  std::vector<std::uint64_t> out;
  out.reserve(seqs.size());
  for (const auto& s : seqs) out.push_back(s.id);
  return out;
}

nlohmann::json body(const SplitManifest& m) {
  return {{"format", "locemb-split-manifest"},
          {"version", 1},
          {"mode", to_string(m.mode)},
          {"seed", m.seed},
          {"fraction", m.fraction},
          {"new_locations", m.new_locations},
          {"train", m.train},
          {"validation", m.validation},
          {"test", m.test},
          {"sequences_sha256", m.sequences_sha256},
          {"location_index_sha256", m.location_index_sha256}};
}

}  // namespace

SplitManifest make_manifest(const DatasetSplit& split,
                            const std::string& sequences_sha256,
                            const std::string& location_index_sha256) {
  SplitManifest m;
  m.mode = split.mode;
  m.seed = split.seed;
  m.fraction = split.fraction;
  m.new_locations = split.new_locations;
  m.train = ids_of(split.train);
  m.validation = ids_of(split.validation);
  m.test = ids_of(split.test);
  m.sequences_sha256 = sequences_sha256;
  m.location_index_sha256 = location_index_sha256;
  m.content_sha256 = sha256_hex(body(m).dump());
  return m;
}

std::string manifest_to_json(const SplitManifest& manifest) {
  nlohmann::json j = body(manifest);
  j["content_sha256"] = sha256_hex(j.dump());
  return j.dump(1);
}

void write_manifest(const std::filesystem::path& path,
                    const SplitManifest& manifest) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("write_manifest: cannot open " + path.string());
  }
  out << manifest_to_json(manifest) << '\n';
}

SplitManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("read_manifest: cannot open " + path.string());
  }
  nlohmann::json j = nlohmann::json::parse(in);
  if (j.value("format", "") != "locemb-split-manifest" ||
      j.value("version", 0) != 1) {
    throw std::runtime_error("read_manifest: " + path.string() +
                             " is not a version-1 split manifest");
  }
  SplitManifest m;
  m.mode = parse_split_mode(j.at("mode").get<std::string>());
  m.seed = j.at("seed").get<std::uint64_t>();
  m.fraction = j.at("fraction").get<double>();
  m.new_locations = j.at("new_locations").get<std::set<std::string>>();
  m.train = j.at("train").get<std::vector<std::uint64_t>>();
  m.validation = j.at("validation").get<std::vector<std::uint64_t>>();
  m.test = j.at("test").get<std::vector<std::uint64_t>>();
  m.sequences_sha256 = j.at("sequences_sha256").get<std::string>();
  m.location_index_sha256 = j.at("location_index_sha256").get<std::string>();
  const std::string stored = j.at("content_sha256").get<std::string>();
  m.content_sha256 = sha256_hex(body(m).dump());
  if (stored != m.content_sha256) {
    throw std::runtime_error("read_manifest: content hash mismatch in " +
                             path.string() + " (manifest was modified)");
  }
  return m;
}

DatasetSplit apply_manifest(const SplitManifest& manifest,
                            std::span<const MobilitySequence> sequences) {
  const std::string actual = sha256_hex(sequences_to_jsonl(sequences));
  if (actual != manifest.sequences_sha256) {
    throw std::runtime_error(
        "apply_manifest: sequences do not match the manifest hash");
  }
  std::unordered_map<std::uint64_t, const MobilitySequence*> by_id;
  for (const auto& s : sequences) by_id.emplace(s.id, &s);
  auto collect = [&](const std::vector<std::uint64_t>& ids) {
    std::vector<MobilitySequence> out;
    out.reserve(ids.size());
    for (auto id : ids) {
      auto it = by_id.find(id);
      if (it == by_id.end()) {
        throw std::runtime_error("apply_manifest: unknown sequence id " +
                                 std::to_string(id));
      }
      out.push_back(*it->second);
    }
    return out;
  };
  DatasetSplit split;
  split.mode = manifest.mode;
  split.seed = manifest.seed;
  split.fraction = manifest.fraction;
  split.new_locations = manifest.new_locations;
  split.train = collect(manifest.train);
  split.validation = collect(manifest.validation);
  split.test = collect(manifest.test);
  return split;
}

}  // namespace locemb::mob
