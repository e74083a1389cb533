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

#include "locemb/num/parameter_store.h"

#include <stdexcept>

namespace locemb::num {

void ParameterStore::add(const std::string& name, Tensor value,
                         bool trainable) {
  if (entries_.contains(name)) {
    throw std::invalid_argument("ParameterStore: duplicate parameter '" +
                                name + "'");
  }
  entries_.emplace(name, Entry{std::move(value), std::nullopt, trainable});
}

bool ParameterStore::contains(const std::string& name) const {
  return entries_.contains(name);
}

const ParameterStore::Entry& ParameterStore::entry(
    const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw std::out_of_range("ParameterStore: unknown parameter '" + name +
                            "'");
  }
  return it->second;
}

ParameterStore::Entry& ParameterStore::entry(const std::string& name) {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw std::out_of_range("ParameterStore: unknown parameter '" + name +
                            "'");
  }
  return it->second;
}

const Tensor& ParameterStore::value(const std::string& name) const {
  return entry(name).value;
}

Tensor& ParameterStore::mutable_value(const std::string& name) {
  return entry(name).value;
}

bool ParameterStore::trainable(const std::string& name) const {
  return entry(name).trainable;
}

void ParameterStore::set_trainable(const std::string& name, bool trainable) {
  entry(name).trainable = trainable;
}

void ParameterStore::freeze_prefix(const std::string& prefix) {
  for (auto& [name, e] : entries_) {
    if (name.starts_with(prefix)) e.trainable = false;
  }
}

bool ParameterStore::has_grad(const std::string& name) const {
  return entry(name).grad.has_value();
}

const Tensor& ParameterStore::grad(const std::string& name) const {
  const Entry& e = entry(name);
  if (!e.grad) {
    throw std::logic_error("ParameterStore: no gradient for '" + name + "'");
  }
  return *e.grad;
}

Tensor& ParameterStore::grad_buffer(const std::string& name) {
  Entry& e = entry(name);
  if (!e.grad) e.grad = Tensor(e.value.shape(), 0.0);
  return *e.grad;
}

void ParameterStore::zero_grads() {
  for (auto& [name, e] : entries_) {
    if (e.grad) {
      e.grad->fill(0.0);
    } else {
      e.grad = Tensor(e.value.shape(), 0.0);
    }
  }
}

void ParameterStore::clear_grads() {
  for (auto& [name, e] : entries_) e.grad.reset();
}

void ParameterStore::add_grads_from(const ParameterStore& other) {
  for (const auto& [name, e] : other.entries_) {
    if (e.grad) grad_buffer(name) += *e.grad;
  }
}

std::vector<std::string> ParameterStore::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [name, e] : entries_) out.push_back(name);
  return out;
}

std::size_t ParameterStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& [name, e] : entries_) n += e.value.size();
  return n;
}

bool ParameterStore::same_values(const ParameterStore& other) const {
  if (entries_.size() != other.entries_.size()) return false;
  for (const auto& [name, e] : entries_) {
    auto it = other.entries_.find(name);
    if (it == other.entries_.end() || !(it->second.value == e.value)) {
      return false;
    }
  }
  return true;
}

}  // namespace locemb::num
