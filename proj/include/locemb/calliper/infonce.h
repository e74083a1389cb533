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

#include "locemb/num/ops.h"

namespace locemb::calliper {

// Bidirectional InfoNCE over matched rows of z_l and z_t (N x d each).
// Rows are L2-normalised, similarities divided by tau, and the loss is the
// mean of the row-wise and column-wise cross entropies against the
// diagonal. N = 1 gives 0. Throws std::invalid_argument for empty or
// mismatched inputs and non-positive tau.
num::Var infonce_loss(num::Var z_l, num::Var z_t, double tau);

// Same value computed directly, without a tape.
double infonce_loss(const num::Tensor& z_l, const num::Tensor& z_t,
                    double tau);

}  // namespace locemb::calliper
