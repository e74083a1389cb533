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

#include "locemb/geo/fcnet.h"

#include <stdexcept>

namespace locemb::geo {

void init_fcnet(num::ParameterStore& store, const std::string& prefix,
                const FcNetShape& shape, num::Rng& rng) {
  num::init_linear(store, prefix + ".in", shape.input, shape.hidden, rng);
  num::init_linear(store, prefix + ".res", shape.hidden, shape.hidden, rng);
  num::init_linear(store, prefix + ".out", shape.hidden, shape.output, rng);
}

FcNetShape fcnet_shape(const num::ParameterStore& store,
                       const std::string& prefix) {
  const num::Tensor& w_in = store.value(prefix + ".in.w");
  const num::Tensor& w_res = store.value(prefix + ".res.w");
  const num::Tensor& w_out = store.value(prefix + ".out.w");
  if (w_res.rows() != w_in.cols() || w_res.cols() != w_in.cols() ||
      w_out.rows() != w_in.cols()) {
    throw std::invalid_argument("fcnet: inconsistent stored layer shapes " +
                                w_in.shape_string() + ", " +
                                w_res.shape_string() + ", " +
                                w_out.shape_string());
  }
  return {w_in.rows(), w_in.cols(), w_out.cols()};
}

num::Var fcnet_forward(num::Tape& tape, const num::ParameterStore& store,
                       const std::string& prefix, num::Var x) {
  const FcNetShape shape = fcnet_shape(store, prefix);
  if (x.value().cols() != shape.input) {
    throw std::invalid_argument(
        "fcnet_forward: input width " + std::to_string(x.value().cols()) +
        " does not match stored input size " + std::to_string(shape.input));
  }
  num::Var h = num::relu(num::linear(tape, store, prefix + ".in", x));
  h = num::add(h, num::relu(num::linear(tape, store, prefix + ".res", h)));
  return num::linear(tape, store, prefix + ".out", h);
}

}  // namespace locemb::geo
