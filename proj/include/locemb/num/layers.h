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

#include "locemb/num/ops.h"
#include "locemb/num/parameter_store.h"
#include "locemb/num/rng.h"

namespace locemb::num {

// Parameters live in a ParameterStore under "<prefix>.<part>" names.

// <prefix>.w (in x out) and <prefix>.b (out), both uniform in
// [-1/sqrt(in), 1/sqrt(in)].
void init_linear(ParameterStore& store, const std::string& prefix,
                 std::size_t in, std::size_t out, Rng& rng);
Var linear(Tape& tape, const ParameterStore& store, const std::string& prefix,
           Var x);

// <prefix>.gamma = 1, <prefix>.beta = 0.
void init_layer_norm(ParameterStore& store, const std::string& prefix,
                     std::size_t width);
Var layer_norm(Tape& tape, const ParameterStore& store,
               const std::string& prefix, Var x);

// Scaled dot-product self-attention with `heads` heads over the rows of x.
// Projections <prefix>.q/.k/.v/.o are linear layers of width d_model.
void init_multi_head_attention(ParameterStore& store, const std::string& prefix,
                               std::size_t d_model, Rng& rng);
Var multi_head_self_attention(Tape& tape, const ParameterStore& store,
                              const std::string& prefix, Var x,
                              std::size_t heads, bool causal,
                              double attention_dropout = 0.0);

}  // namespace locemb::num
