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
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "locemb/mob/types.h"

namespace locemb::mob {

// POI file: comma-separated `id,x,y,description` with an optional header
// row starting with "id". Empty descriptions are rejected with the line.
std::vector<PoiRecord> load_pois(const std::filesystem::path& path);
std::vector<PoiRecord> parse_pois(std::istream& in, const std::string& source);
void write_pois(const std::filesystem::path& path,
                std::span<const PoiRecord> pois);

}  // namespace locemb::mob
