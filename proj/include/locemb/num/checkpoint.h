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
#include <map>
#include <string>

#include "locemb/num/parameter_store.h"

namespace locemb::num {

// Checkpoint file, format version 1. All integers little-endian.
//
//   magic     8 bytes  "LOCEMBCK"
//   version   u32      1
//   n_meta    u32
//   n_meta x { u32 key_len, key bytes, u32 value_len, value bytes }
//   n_params  u32
//   n_params x { u32 name_len, name bytes, u8 trainable, u32 rank,
//                rank x u64 dim, prod(dims) x f64 IEEE-754 values }
//
// Parameters are written in name order, so identical stores produce
// identical files.
inline constexpr std::uint32_t kCheckpointVersion = 1;

using Metadata = std::map<std::string, std::string>;

struct Checkpoint {
  ParameterStore params;
  Metadata metadata;
};

void save_checkpoint(const std::filesystem::path& path,
                     const ParameterStore& params,
                     const Metadata& metadata = {});
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace locemb::num
