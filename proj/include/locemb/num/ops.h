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

#include <cstddef>
#include <span>
#include <vector>

#include "locemb/num/tape.h"

namespace locemb::num {

// Differentiable operations recorded on the tape of their inputs. All
// operate on matrices (rank-1 tensors count as one row). Shape mismatches
// throw std::invalid_argument naming the operation and the shapes.

Var matmul(Var a, Var b);              // a(m x k) * b(k x n)
Var matmul_nt(Var a, Var b);           // a(m x k) * b(n x k)^T
Var transpose(Var a);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);                 // elementwise
Var scale(Var a, double factor);
Var add_row(Var a, Var row);           // broadcast row over every row of a
Var relu(Var a);
Var layer_norm(Var x, Var gamma, Var beta, double eps = 1e-5);
// Inverted dropout; identity when the tape is in eval mode or rate == 0.
Var dropout(Var x, double rate);
// Row-wise softmax. With causal set, row i only covers columns 0..i and
// the remaining entries are exactly zero.
Var softmax_rows(Var x, bool causal = false);
Var log_softmax_rows(Var x);
// Mean over rows of -log softmax(logits)[row, target[row]].
Var cross_entropy(Var logits, std::span<const std::size_t> targets);
Var concat_cols(std::span<const Var> parts);
Var slice_cols(Var a, std::size_t begin, std::size_t end);
Var slice_rows(Var a, std::size_t begin, std::size_t end);
// out[i] = table[indices[i]]; gradients scatter-add into the table.
Var gather_rows(Var table, std::span<const std::size_t> indices);
Var l2_normalize_rows(Var x, double eps = 1e-12);
Var sum(Var a);
Var mean(Var a);

// Plain (non-recorded) helpers shared by evaluation code.
Tensor softmax_rows(const Tensor& x);
double log_sum_exp(std::span<const double> values);

}  // namespace locemb::num
