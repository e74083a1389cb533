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
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "locemb/num/parameter_store.h"
#include "locemb/num/rng.h"
#include "locemb/num/tensor.h"

namespace locemb::num {

class Tape;

// Handle to a value recorded on a Tape. Cheap to copy; only valid while the
// owning tape is alive.
class Var {
 public:
  Var() = default;

  bool valid() const noexcept { return tape_ != nullptr; }
  Tape* tape() const noexcept { return tape_; }
  std::size_t id() const noexcept { return id_; }
  const Tensor& value() const;

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Records a forward computation so that backward() can propagate gradients
// in reverse order. One tape per forward pass; tapes are not shared across
// threads.
class Tape {
 public:
  enum class Mode { kEval, kTrain };
  using BackwardFn = std::function<void(Tape&, const Tensor& grad_out,
                                        const Tensor& out_value)>;

  explicit Tape(Mode mode = Mode::kEval, std::uint64_t dropout_seed = 0);
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool training() const noexcept { return mode_ == Mode::kTrain; }
  Rng& rng() noexcept { return rng_; }

  Var constant(Tensor value);
  // Leaf that receives a gradient but is not tied to a ParameterStore.
  Var variable(Tensor value);
  // Leaf bound to a stored parameter. Frozen parameters are recorded as
  // constants. Repeated calls with the same name return the same leaf.
  Var param(const ParameterStore& store, const std::string& name);

  Var record(Tensor value, bool requires_grad, BackwardFn backward);

  const Tensor& value(Var v) const;
  bool requires_grad(Var v) const;
  // Gradient accumulator of v, zero-initialised on first access.
  Tensor& grad(Var v);
  // Null when no gradient reached v.
  const Tensor* grad_if_any(Var v) const;

  void backward(Var loss);

  // Adds the gradients of every parameter leaf into store, and makes sure
  // every parameter of the store has a (possibly zero) gradient afterwards.
  void accumulate_gradients(ParameterStore& store) const;

  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool has_grad = false;
    bool requires_grad = false;
    BackwardFn backward;
  };

  const Node& node(Var v) const;
  Node& node(Var v);

  Mode mode_;
  Rng rng_;
  std::vector<Node> nodes_;
  std::map<std::string, std::size_t> params_;
  bool backward_done_ = false;
};

}  // namespace locemb::num
