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

#include <string>

#include "locemb/num/layers.h"

namespace locemb::geo {

// Residual fully connected network used as the location encoder's NN:
//   h   = relu(x W_in + b_in)
//   h   = h + relu(h W_res + b_res)
//   out = h W_out + b_out
struct FcNetShape {
  std::size_t input = 128;
  std::size_t hidden = 256;
  std::size_t output = 128;

  friend bool operator==(const FcNetShape&, const FcNetShape&) = default;
};

void init_fcnet(num::ParameterStore& store, const std::string& prefix,
                const FcNetShape& shape, num::Rng& rng);

// x holds one encoding per row. Throws std::invalid_argument when the
// width of x or the stored parameters disagree with the expected shape.
num::Var fcnet_forward(num::Tape& tape, const num::ParameterStore& store,
                       const std::string& prefix, num::Var x);

// Reads the layer sizes back from stored parameters.
FcNetShape fcnet_shape(const num::ParameterStore& store,
                       const std::string& prefix);

}  // namespace locemb::geo
