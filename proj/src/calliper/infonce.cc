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

#include "locemb/calliper/infonce.h"

#include <numeric>
#include <stdexcept>
#include <vector>

#include "locemb/num/tape.h"

namespace locemb::calliper {
namespace {

void check(const num::Tensor& a, const num::Tensor& b, double tau) {
  if (a.rows() == 0 || a.rank() != 2 || !a.same_shape(b)) {
    throw std::invalid_argument("infonce_loss: need matching non-empty N x d "
                                "inputs, got " + a.shape_string() + " and " +
                                b.shape_string());
  }
  if (!(tau > 0.0)) {
    throw std::invalid_argument("infonce_loss: temperature must be positive");
  }
}

}  // namespace

num::Var infonce_loss(num::Var z_l, num::Var z_t, double tau) {
  check(z_l.value(), z_t.value(), tau);
  const std::size_t n = z_l.value().rows();
  std::vector<std::size_t> diag(n);
  std::iota(diag.begin(), diag.end(), std::size_t{0});
  num::Var a = num::l2_normalize_rows(z_l);
  num::Var b = num::l2_normalize_rows(z_t);
  num::Var logits = num::scale(num::matmul_nt(a, b), 1.0 / tau);
  num::Var l2t = num::cross_entropy(logits, diag);
  num::Var t2l = num::cross_entropy(num::transpose(logits), diag);
  return num::scale(num::add(l2t, t2l), 0.5);
}

double infonce_loss(const num::Tensor& z_l, const num::Tensor& z_t,
                    double tau) {
  check(z_l, z_t, tau);
  const std::size_t n = z_l.rows();
  const std::size_t d = z_l.cols();
  auto normalised = [&](const num::Tensor& z) {
    num::Tensor out = z;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (double x : z.row_span(i)) s += x * x;
      s = std::sqrt(s);
      if (s < 1e-12) s = 1e-12;
      for (double& x : out.row_span(i)) x /= s;
    }
    return out;
  };
  const num::Tensor a = normalised(z_l);
  const num::Tensor b = normalised(z_t);
  std::vector<double> sim(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += a.at(i, k) * b.at(j, k);
      sim[i * n + j] = s / tau;
    }
  }
  double total = 0.0;
  std::vector<double> buf(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) buf[j] = sim[i * n + j];
    total += num::log_sum_exp(buf) - sim[i * n + i];
    for (std::size_t j = 0; j < n; ++j) buf[j] = sim[j * n + i];
    total += num::log_sum_exp(buf) - sim[i * n + i];
  }
  return total / (2.0 * static_cast<double>(n));
}

}  // namespace locemb::calliper
