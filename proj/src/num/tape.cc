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

#include "locemb/num/tape.h"

#include <stdexcept>

namespace locemb::num {

const Tensor& Var::value() const {
  if (tape_ == nullptr) throw std::logic_error("Var: not bound to a tape");
  return tape_->value(*this);
}

Tape::Tape(Mode mode, std::uint64_t dropout_seed)
    : mode_(mode), rng_(dropout_seed) {
  nodes_.reserve(256);
}

const Tape::Node& Tape::node(Var v) const {
  if (v.tape_ != this || v.id_ >= nodes_.size()) {
    throw std::invalid_argument("Tape: variable does not belong to this tape");
  }
  return nodes_[v.id_];
}

Tape::Node& Tape::node(Var v) {
  if (v.tape_ != this || v.id_ >= nodes_.size()) {
    throw std::invalid_argument("Tape: variable does not belong to this tape");
  }
  return nodes_[v.id_];
}

Var Tape::constant(Tensor value) {
  return record(std::move(value), false, nullptr);
}

Var Tape::variable(Tensor value) {
  return record(std::move(value), true, nullptr);
}

Var Tape::param(const ParameterStore& store, const std::string& name) {
  if (auto it = params_.find(name); it != params_.end()) {
    return Var(this, it->second);
  }
  const bool trainable = store.trainable(name);
  Var v = record(store.value(name), trainable, nullptr);
  if (trainable) params_.emplace(name, v.id_);
  return v;
}

Var Tape::record(Tensor value, bool requires_grad, BackwardFn backward) {
  if (backward_done_) {
    throw std::logic_error("Tape: cannot record after backward()");
  }
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  if (requires_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

const Tensor& Tape::value(Var v) const { return node(v).value; }

bool Tape::requires_grad(Var v) const { return node(v).requires_grad; }

Tensor& Tape::grad(Var v) {
  Node& n = node(v);
  if (!n.has_grad) {
    n.grad = Tensor(n.value.shape(), 0.0);
    n.has_grad = true;
  }
  return n.grad;
}

const Tensor* Tape::grad_if_any(Var v) const {
  const Node& n = node(v);
  return n.has_grad ? &n.grad : nullptr;
}

void Tape::backward(Var loss) {
  const Node& root = node(loss);
  if (backward_done_) throw std::logic_error("Tape: backward() called twice");
  if (root.value.size() != 1) {
    throw std::invalid_argument("Tape::backward: loss must be a scalar, got " +
                                root.value.shape_string());
  }
  if (!root.requires_grad || !root.backward) {
    throw std::logic_error(
        "Tape::backward: loss was not produced by a recorded computation "
        "over trainable values");
  }
  backward_done_ = true;
  grad(loss).fill(1.0);
  for (std::size_t i = loss.id_ + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.has_grad || !n.backward) continue;
    n.backward(*this, n.grad, n.value);
  }
}

void Tape::accumulate_gradients(ParameterStore& store) const {
  for (const auto& [name, id] : params_) {
    const Node& n = nodes_[id];
    Tensor& g = store.grad_buffer(name);
    if (n.has_grad) g += n.grad;
  }
  for (const auto& name : store.names()) store.grad_buffer(name);
}

}  // namespace locemb::num
