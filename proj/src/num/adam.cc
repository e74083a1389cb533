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

#include "locemb/num/adam.h"

#include <cmath>
#include <stdexcept>

namespace locemb::num {

Adam::Adam(AdamOptions options) : options_(options) {
  if (!(options_.learning_rate > 0.0)) {
    throw std::invalid_argument("Adam: learning rate must be positive");
  }
}

void Adam::step(ParameterStore& params) {
  const auto names = params.names();
  for (const auto& name : names) {
    if (params.trainable(name) && !params.has_grad(name)) {
      throw std::logic_error("Adam::step: missing gradient for parameter '" +
                             name + "'");
    }
  }
  ++step_;
  const double b1 = options_.beta1, b2 = options_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (const auto& name : names) {
    if (!params.trainable(name)) continue;
    Tensor& value = params.mutable_value(name);
    Tensor& grad = params.grad_buffer(name);
    auto [it, inserted] = moments_.try_emplace(name);
    if (inserted) {
      it->second.first = Tensor(value.shape(), 0.0);
      it->second.second = Tensor(value.shape(), 0.0);
    }
    Tensor& m = it->second.first;
    Tensor& v = it->second.second;
    for (std::size_t i = 0; i < value.size(); ++i) {
      const double g = grad[i];
      m[i] = b1 * m[i] + (1.0 - b1) * g;
      v[i] = b2 * v[i] + (1.0 - b2) * g * g;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      value[i] -= options_.learning_rate * m_hat /
                  (std::sqrt(v_hat) + options_.epsilon);
    }
    grad.fill(0.0);
  }
}

}  // namespace locemb::num
