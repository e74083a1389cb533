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

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "locemb/num/parameter_store.h"
#include "locemb/num/tape.h"

namespace locemb::testing {

// Builds a scalar loss on the given tape from the parameters in store.
using LossBuilder =
    std::function<num::Var(num::Tape&, const num::ParameterStore&)>;

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t checked = 0;
};

// Relative error |a - n| / max(|a|, |n|, floor). The floor keeps
// near-zero gradients from turning round-off into huge ratios.
inline double relative_error(double analytic, double numeric,
                             double floor = 1e-3) {
  const double denom =
      std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

// Compares reverse-mode gradients with central finite differences of step
// h for every scalar of every trainable parameter (or at most
// `max_per_param` evenly strided scalars per parameter).
inline GradCheckResult check_gradients(num::ParameterStore store,
                                       const LossBuilder& build,
                                       double h = 1e-5,
                                       std::size_t max_per_param = 0) {
  store.clear_grads();
  {
    num::Tape tape;
    num::Var loss = build(tape, store);
    tape.backward(loss);
    tape.accumulate_gradients(store);
  }
  auto eval = [&]() {
    num::Tape tape;
    return build(tape, store).value().item();
  };
  GradCheckResult result;
  for (const auto& name : store.names()) {
    if (!store.trainable(name)) continue;
    const num::Tensor analytic = store.grad(name);
    num::Tensor& value = store.mutable_value(name);
    const std::size_t n = value.size();
    const std::size_t stride =
        max_per_param == 0 || n <= max_per_param ? 1 : n / max_per_param;
    for (std::size_t i = 0; i < n; i += stride) {
      const double saved = value[i];
      value[i] = saved + h;
      const double up = eval();
      value[i] = saved - h;
      const double down = eval();
      value[i] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double err = relative_error(analytic[i], numeric);
      ++result.checked;
      if (err > result.max_relative_error) {
        result.max_relative_error = err;
        result.worst_parameter = name + "[" + std::to_string(i) + "]";
      }
    }
  }
  return result;
}

}  // namespace locemb::testing
