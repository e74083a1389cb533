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

#include "locemb/num/layers.h"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace locemb::num {

void init_linear(ParameterStore& store, const std::string& prefix,
                 std::size_t in, std::size_t out, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  Tensor w = Tensor::matrix(in, out);
  for (double& v : w.values()) v = rng.uniform(-bound, bound);
  Tensor b = Tensor::row(std::vector<double>(out));
  for (double& v : b.values()) v = rng.uniform(-bound, bound);
  store.add(prefix + ".w", std::move(w));
  store.add(prefix + ".b", std::move(b));
}

Var linear(Tape& tape, const ParameterStore& store, const std::string& prefix,
           Var x) {
  return add_row(matmul(x, tape.param(store, prefix + ".w")),
                 tape.param(store, prefix + ".b"));
}

void init_layer_norm(ParameterStore& store, const std::string& prefix,
                     std::size_t width) {
  store.add(prefix + ".gamma", Tensor::row(std::vector<double>(width, 1.0)));
  store.add(prefix + ".beta", Tensor::row(std::vector<double>(width, 0.0)));
}

Var layer_norm(Tape& tape, const ParameterStore& store,
               const std::string& prefix, Var x) {
  return layer_norm(x, tape.param(store, prefix + ".gamma"),
                    tape.param(store, prefix + ".beta"));
}

void init_multi_head_attention(ParameterStore& store, const std::string& prefix,
                               std::size_t d_model, Rng& rng) {
  for (const char* part : {".q", ".k", ".v", ".o"}) {
    init_linear(store, prefix + part, d_model, d_model, rng);
  }
}

Var multi_head_self_attention(Tape& tape, const ParameterStore& store,
                              const std::string& prefix, Var x,
                              std::size_t heads, bool causal,
                              double attention_dropout) {
  const std::size_t d_model = x.value().cols();
  if (heads == 0 || d_model % heads != 0) {
    throw std::invalid_argument("multi_head_self_attention: d_model " +
                                std::to_string(d_model) +
                                " is not divisible by " +
                                std::to_string(heads) + " heads");
  }
  const std::size_t d_head = d_model / heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(d_head));
  Var q = linear(tape, store, prefix + ".q", x);
  Var k = linear(tape, store, prefix + ".k", x);
  Var v = linear(tape, store, prefix + ".v", x);
  std::vector<Var> contexts;
  contexts.reserve(heads);
  for (std::size_t h = 0; h < heads; ++h) {
    const std::size_t lo = h * d_head, hi = lo + d_head;
    Var scores =
        scale(matmul_nt(slice_cols(q, lo, hi), slice_cols(k, lo, hi)),
              inv_sqrt);
    Var weights = dropout(softmax_rows(scores, causal), attention_dropout);
    contexts.push_back(matmul(weights, slice_cols(v, lo, hi)));
  }
  Var merged = heads == 1 ? contexts[0] : concat_cols(contexts);
  return linear(tape, store, prefix + ".o", merged);
}

}  // namespace locemb::num
