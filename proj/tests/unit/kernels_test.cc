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

#include <gtest/gtest.h>

#include <vector>

#include "locemb/num/kernels.h"
#include "locemb/num/rng.h"

namespace locemb::num::kernels {
namespace {

std::vector<double> random_buffer(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

// Naive triple loop over explicit index maps.
std::vector<double> reference(std::size_t m, std::size_t n, std::size_t k,
                              const std::vector<double>& a,
                              const std::vector<double>& b, bool ta, bool tb) {
  std::vector<double> c(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) {
        const double av = ta ? a[p * m + i] : a[i * k + p];
        const double bv = tb ? b[j * k + p] : b[p * n + j];
        s += av * bv;
      }
      c[i * n + j] = s;
    }
  }
  return c;
}

TEST(Kernels, SerialAndParallelAgreeBitForBit) {
  Rng rng(5);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t m = 1 + rng.below(70), n = 1 + rng.below(70),
                      k = 1 + rng.below(70);
    const auto a = random_buffer(rng, m * k);
    const auto b = random_buffer(rng, k * n);
    const auto bt = random_buffer(rng, n * k);
    const auto at = random_buffer(rng, k * m);
    std::vector<double> s(m * n), p(m * n);

    gemm_nn(Exec::kSerial, m, n, k, a.data(), b.data(), s.data(), false);
    gemm_nn(Exec::kParallel, m, n, k, a.data(), b.data(), p.data(), false);
    EXPECT_EQ(s, p);
    const auto ref_nn = reference(m, n, k, a, b, false, false);
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_NEAR(s[i], ref_nn[i], 1e-10);
    }

    gemm_nt(Exec::kSerial, m, n, k, a.data(), bt.data(), s.data(), false);
    gemm_nt(Exec::kParallel, m, n, k, a.data(), bt.data(), p.data(), false);
    EXPECT_EQ(s, p);
    const auto ref_nt = reference(m, n, k, a, bt, false, true);
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_NEAR(s[i], ref_nt[i], 1e-10);
    }

    gemm_tn(Exec::kSerial, m, n, k, at.data(), b.data(), s.data(), false);
    gemm_tn(Exec::kParallel, m, n, k, at.data(), b.data(), p.data(), false);
    EXPECT_EQ(s, p);
    const auto ref_tn = reference(m, n, k, at, b, true, false);
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_NEAR(s[i], ref_tn[i], 1e-10);
    }
  }
}

TEST(Kernels, AccumulateAddsToExistingOutput) {
  const std::vector<double> a = {1, 2}, b = {3, 4};
  std::vector<double> c = {10};
  gemm_nn(Exec::kSerial, 1, 1, 2, a.data(), b.data(), c.data(), true);
  EXPECT_DOUBLE_EQ(c[0], 21.0);
}

}  // namespace
}  // namespace locemb::num::kernels
