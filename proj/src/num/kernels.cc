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

#include "locemb/num/kernels.h"

#include <algorithm>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace locemb::num::kernels {
namespace {

inline void init_rows(double* c, std::size_t row_begin, std::size_t row_end,
                      std::size_t n, bool accumulate) {
  if (!accumulate) std::fill(c + row_begin * n, c + row_end * n, 0.0);
}

inline void nn_row(std::size_t i, std::size_t n, std::size_t k,
                   const double* a, const double* b, double* c) {
  double* ci = c + i * n;
  const double* ai = a + i * k;
  for (std::size_t p = 0; p < k; ++p) {
    const double aip = ai[p];
    const double* bp = b + p * n;
    for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
  }
}

inline void nt_row(std::size_t i, std::size_t n, std::size_t k,
                   const double* a, const double* b, double* c) {
  double* ci = c + i * n;
  const double* ai = a + i * k;
  for (std::size_t j = 0; j < n; ++j) {
    const double* bj = b + j * k;
    double s = 0.0;
    for (std::size_t p = 0; p < k; ++p) s += ai[p] * bj[p];
    ci[j] += s;
  }
}

inline void tn_row(std::size_t i, std::size_t m, std::size_t n, std::size_t k,
                   const double* a, const double* b, double* c) {
  double* ci = c + i * n;
  for (std::size_t p = 0; p < k; ++p) {
    const double api = a[p * m + i];
    const double* bp = b + p * n;
    for (std::size_t j = 0; j < n; ++j) ci[j] += api * bp[j];
  }
}

}  // namespace

void gemm_nn(Exec exec, std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c, bool accumulate) {
  init_rows(c, 0, m, n, accumulate);
  if (exec == Exec::kParallel) {
    const auto rows = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) {
      nn_row(static_cast<std::size_t>(i), n, k, a, b, c);
    }
    return;
  }
  for (std::size_t i = 0; i < m; ++i) nn_row(i, n, k, a, b, c);
}

void gemm_nt(Exec exec, std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c, bool accumulate) {
  init_rows(c, 0, m, n, accumulate);
  if (exec == Exec::kParallel) {
    const auto rows = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) {
      nt_row(static_cast<std::size_t>(i), n, k, a, b, c);
    }
    return;
  }
  for (std::size_t i = 0; i < m; ++i) nt_row(i, n, k, a, b, c);
}

void gemm_tn(Exec exec, std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c, bool accumulate) {
  init_rows(c, 0, m, n, accumulate);
  if (exec == Exec::kParallel) {
    const auto rows = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) {
      tn_row(static_cast<std::size_t>(i), m, n, k, a, b, c);
    }
    return;
  }
  for (std::size_t i = 0; i < m; ++i) tn_row(i, m, n, k, a, b, c);
}

Exec choose(std::size_t m, std::size_t n, std::size_t k) {
  if (!openmp_enabled() || max_threads() < 2) return Exec::kSerial;
  return m * n * k >= kParallelThreshold && m > 1 ? Exec::kParallel
                                                  : Exec::kSerial;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

}  // namespace locemb::num::kernels
