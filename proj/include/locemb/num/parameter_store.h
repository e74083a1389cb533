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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "locemb/num/tensor.h"

namespace locemb::num {

// Named trainable tensors and their gradients. Gradients are absent until
// a backward pass (or zero_grads) creates them; every present gradient has
// the shape of its parameter.
class ParameterStore {
 public:
  void add(const std::string& name, Tensor value, bool trainable = true);
  bool contains(const std::string& name) const;
  const Tensor& value(const std::string& name) const;
  Tensor& mutable_value(const std::string& name);

  bool trainable(const std::string& name) const;
  void set_trainable(const std::string& name, bool trainable);
  // Marks every parameter whose name starts with prefix as frozen.
  void freeze_prefix(const std::string& prefix);

  bool has_grad(const std::string& name) const;
  const Tensor& grad(const std::string& name) const;
  // Returns the gradient buffer, creating a zero one if absent.
  Tensor& grad_buffer(const std::string& name);
  void zero_grads();
  void clear_grads();
  // Adds every present gradient of other into this store.
  void add_grads_from(const ParameterStore& other);

  std::vector<std::string> names() const;
  std::size_t size() const { return entries_.size(); }
  std::size_t scalar_count() const;

  // Values only; gradients and trainable flags are ignored.
  bool same_values(const ParameterStore& other) const;

 private:
  struct Entry {
    Tensor value;
    std::optional<Tensor> grad;
    bool trainable = true;
  };
  const Entry& entry(const std::string& name) const;
  Entry& entry(const std::string& name);

  std::map<std::string, Entry> entries_;
};

}  // namespace locemb::num
