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
#include <map>
#include <string>

#include "locemb/num/parameter_store.h"

namespace locemb::num {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction. step() updates every trainable parameter from
// its gradient and then zeroes the gradients. Frozen parameters are skipped.
class Adam {
 public:
  explicit Adam(AdamOptions options = {});

  void step(ParameterStore& params);

  std::int64_t step_count() const noexcept { return step_; }
  const AdamOptions& options() const noexcept { return options_; }

 private:
  struct Moments {
    Tensor first;
    Tensor second;
  };

  AdamOptions options_;
  std::map<std::string, Moments> moments_;
  std::int64_t step_ = 0;
};

}  // namespace locemb::num
