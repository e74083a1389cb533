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

#include "locemb/baselines/vanilla.h"

#include <stdexcept>

#include "locemb/num/rng.h"

namespace locemb::baselines {

pred::EmbedderHandle vanilla_e2e_embedder(const mob::LocationIndex& index,
                                          std::size_t dimension,
                                          std::uint64_t seed) {
  if (index.empty() || dimension == 0) {
    throw std::invalid_argument(
        "vanilla_e2e_embedder: need a non-empty index and dimension");
  }
  num::Rng rng(seed);
  pred::EmbedderHandle h;
  h.kind = pred::EmbedderKind::kLookup;
  h.frozen = false;
  h.table = num::Tensor::matrix(index.size(), dimension);
  for (double& x : h.table.values()) x = rng.normal();
  h.index_fingerprint = index.fingerprint();
  return h;
}

}  // namespace locemb::baselines
