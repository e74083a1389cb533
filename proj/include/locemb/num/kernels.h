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

namespace locemb::num::kernels {

// Dense matrix products on row-major buffers. Every kernel exists in a
// serial reference form and an OpenMP form. The OpenMP form splits work
// over output rows only, so each output element is summed in the same
// order and both forms produce bit-identical results.
enum class Exec { kSerial, kParallel };

// C(m x n) = [C +] A(m x k) * B(k x n)
void gemm_nn(Exec exec, std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c, bool accumulate);
// C(m x n) = [C +] A(m x k) * B(n x k)^T
void gemm_nt(Exec exec, std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c, bool accumulate);
// C(m x n) = [C +] A(k x m)^T * B(k x n)
void gemm_tn(Exec exec, std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c, bool accumulate);

// Products below this many multiply-adds always run serially.
inline constexpr std::size_t kParallelThreshold = 1u << 16;

// Dispatch used by the tape ops: parallel when compiled with OpenMP and the
// product is large enough.
Exec choose(std::size_t m, std::size_t n, std::size_t k);

int max_threads();
bool openmp_enabled();

}  // namespace locemb::num::kernels
