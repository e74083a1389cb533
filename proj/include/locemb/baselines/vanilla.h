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

#include "locemb/pred/embedder.h"

namespace locemb::baselines {

// Trainable lookup table with one N(0, 1) row per location, learned
// jointly with the predictor. Rows of locations that never occur in the
// training data keep their initial values.
pred::EmbedderHandle vanilla_e2e_embedder(const mob::LocationIndex& index,
                                          std::size_t dimension,
                                          std::uint64_t seed);

}  // namespace locemb::baselines
