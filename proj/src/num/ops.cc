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

#include "locemb/num/ops.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "locemb/num/kernels.h"

namespace locemb::num {
namespace {

Tape& same_tape(Var a, Var b, const char* op) {
  if (a.tape() == nullptr || a.tape() != b.tape()) {
    throw std::invalid_argument(std::string(op) +
                                ": operands belong to different tapes");
  }
  return *a.tape();
}

[[noreturn]] void shape_error(const char* op, const Tensor& a,
                              const Tensor& b) {
  throw std::invalid_argument(std::string(op) + ": incompatible shapes " +
                              a.shape_string() + " and " + b.shape_string());
}

bool any_grad(Tape& t, Var a, Var b) {
  return t.requires_grad(a) || t.requires_grad(b);
}

}  // namespace

Var matmul(Var a, Var b) {
  Tape& t = same_tape(a, b, "matmul");
  const Tensor& av = t.value(a);
  const Tensor& bv = t.value(b);
  if (av.cols() != bv.rows()) shape_error("matmul", av, bv);
  const std::size_t m = av.rows(), k = av.cols(), n = bv.cols();
  Tensor out = Tensor::matrix(m, n);
  kernels::gemm_nn(kernels::choose(m, n, k), m, n, k, av.data(), bv.data(),
                   out.data(), false);
  return t.record(std::move(out), any_grad(t, a, b),
                  [a, b, m, n, k](Tape& tp, const Tensor& g, const Tensor&) {
                    if (tp.requires_grad(a)) {
                      Tensor& ga = tp.grad(a);
                      kernels::gemm_nt(kernels::choose(m, k, n), m, k, n,
                                       g.data(), tp.value(b).data(), ga.data(),
                                       true);
                    }
                    if (tp.requires_grad(b)) {
                      Tensor& gb = tp.grad(b);
                      kernels::gemm_tn(kernels::choose(k, n, m), k, n, m,
                                       tp.value(a).data(), g.data(), gb.data(),
                                       true);
                    }
                  });
}

Var matmul_nt(Var a, Var b) {
  Tape& t = same_tape(a, b, "matmul_nt");
  const Tensor& av = t.value(a);
  const Tensor& bv = t.value(b);
  if (av.cols() != bv.cols()) shape_error("matmul_nt", av, bv);
  const std::size_t m = av.rows(), k = av.cols(), n = bv.rows();
  Tensor out = Tensor::matrix(m, n);
  kernels::gemm_nt(kernels::choose(m, n, k), m, n, k, av.data(), bv.data(),
                   out.data(), false);
  return t.record(std::move(out), any_grad(t, a, b),
                  [a, b, m, n, k](Tape& tp, const Tensor& g, const Tensor&) {
                    if (tp.requires_grad(a)) {
                      Tensor& ga = tp.grad(a);
                      kernels::gemm_nn(kernels::choose(m, k, n), m, k, n,
                                       g.data(), tp.value(b).data(), ga.data(),
                                       true);
                    }
                    if (tp.requires_grad(b)) {
                      Tensor& gb = tp.grad(b);
                      kernels::gemm_tn(kernels::choose(n, k, m), n, k, m,
                                       g.data(), tp.value(a).data(), gb.data(),
                                       true);
                    }
                  });
}

Var transpose(Var a) {
  Tape& t = *a.tape();
  const Tensor& av = t.value(a);
  const std::size_t m = av.rows(), n = av.cols();
  Tensor out = Tensor::matrix(n, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.at(j, i) = av.at(i, j);
  }
  return t.record(std::move(out), t.requires_grad(a),
                  [a, m, n](Tape& tp, const Tensor& g, const Tensor&) {
                    Tensor& ga = tp.grad(a);
                    for (std::size_t i = 0; i < m; ++i) {
                      for (std::size_t j = 0; j < n; ++j) {
                        ga.at(i, j) += g.at(j, i);
                      }
                    }
                  });
}

Var add(Var a, Var b) {
  Tape& t = same_tape(a, b, "add");
  const Tensor& av = t.value(a);
  const Tensor& bv = t.value(b);
  if (!av.same_shape(bv)) shape_error("add", av, bv);
  Tensor out = av;
  out += bv;
  return t.record(std::move(out), any_grad(t, a, b),
                  [a, b](Tape& tp, const Tensor& g, const Tensor&) {
                    if (tp.requires_grad(a)) tp.grad(a) += g;
                    if (tp.requires_grad(b)) tp.grad(b) += g;
                  });
}

Var sub(Var a, Var b) {
  Tape& t = same_tape(a, b, "sub");
  const Tensor& av = t.value(a);
  const Tensor& bv = t.value(b);
  if (!av.same_shape(bv)) shape_error("sub", av, bv);
  Tensor out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  return t.record(std::move(out), any_grad(t, a, b),
                  [a, b](Tape& tp, const Tensor& g, const Tensor&) {
                    if (tp.requires_grad(a)) tp.grad(a) += g;
                    if (tp.requires_grad(b)) {
                      Tensor& gb = tp.grad(b);
                      for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
                    }
                  });
}

Var mul(Var a, Var b) {
  Tape& t = same_tape(a, b, "mul");
  const Tensor& av = t.value(a);
  const Tensor& bv = t.value(b);
  if (!av.same_shape(bv)) shape_error("mul", av, bv);
  Tensor out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  return t.record(std::move(out), any_grad(t, a, b),
                  [a, b](Tape& tp, const Tensor& g, const Tensor&) {
                    if (tp.requires_grad(a)) {
                      Tensor& ga = tp.grad(a);
                      const Tensor& bv2 = tp.value(b);
                      for (std::size_t i = 0; i < g.size(); ++i) {
                        ga[i] += g[i] * bv2[i];
                      }
                    }
                    if (tp.requires_grad(b)) {
                      Tensor& gb = tp.grad(b);
                      const Tensor& av2 = tp.value(a);
                      for (std::size_t i = 0; i < g.size(); ++i) {
                        gb[i] += g[i] * av2[i];
                      }
                    }
                  });
}

Var scale(Var a, double factor) {
  Tape& t = *a.tape();
  Tensor out = t.value(a);
  for (double& v : out.values()) v *= factor;
  return t.record(std::move(out), t.requires_grad(a),
                  [a, factor](Tape& tp, const Tensor& g, const Tensor&) {
                    Tensor& ga = tp.grad(a);
                    for (std::size_t i = 0; i < g.size(); ++i) {
                      ga[i] += factor * g[i];
                    }
                  });
}

Var add_row(Var a, Var row) {
  Tape& t = same_tape(a, row, "add_row");
  const Tensor& av = t.value(a);
  const Tensor& rv = t.value(row);
  if (rv.size() != av.cols()) shape_error("add_row", av, rv);
  Tensor out = av;
  const std::size_t m = av.rows(), n = av.cols();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.at(i, j) += rv[j];
  }
  return t.record(std::move(out), any_grad(t, a, row),
                  [a, row, m, n](Tape& tp, const Tensor& g, const Tensor&) {
                    if (tp.requires_grad(a)) tp.grad(a) += g;
                    if (tp.requires_grad(row)) {
                      Tensor& gr = tp.grad(row);
                      for (std::size_t i = 0; i < m; ++i) {
                        for (std::size_t j = 0; j < n; ++j) {
                          gr[j] += g.at(i, j);
                        }
                      }
                    }
                  });
}

Var relu(Var a) {
  Tape& t = *a.tape();
  Tensor out = t.value(a);
  for (double& v : out.values()) v = v > 0.0 ? v : 0.0;
  return t.record(std::move(out), t.requires_grad(a),
                  [a](Tape& tp, const Tensor& g, const Tensor&) {
                    Tensor& ga = tp.grad(a);
                    const Tensor& av = tp.value(a);
                    for (std::size_t i = 0; i < g.size(); ++i) {
                      if (av[i] > 0.0) ga[i] += g[i];
                    }
                  });
}

Var layer_norm(Var x, Var gamma, Var beta, double eps) {
  Tape& t = same_tape(x, gamma, "layer_norm");
  same_tape(x, beta, "layer_norm");
  const Tensor& xv = t.value(x);
  const std::size_t m = xv.rows(), n = xv.cols();
  if (t.value(gamma).size() != n || t.value(beta).size() != n) {
    shape_error("layer_norm", xv, t.value(gamma));
  }
  const Tensor& gv = t.value(gamma);
  const Tensor& bv = t.value(beta);
  Tensor normalized = Tensor::matrix(m, n);
  std::vector<double> inv_std(m);
  Tensor out = Tensor::matrix(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    double mu = 0.0;
    for (std::size_t j = 0; j < n; ++j) mu += xv.at(i, j);
    mu /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = xv.at(i, j) - mu;
      var += d * d;
    }
    var /= static_cast<double>(n);
    inv_std[i] = 1.0 / std::sqrt(var + eps);
    for (std::size_t j = 0; j < n; ++j) {
      normalized.at(i, j) = (xv.at(i, j) - mu) * inv_std[i];
      out.at(i, j) = normalized.at(i, j) * gv[j] + bv[j];
    }
  }
  const bool needs = t.requires_grad(x) || t.requires_grad(gamma) ||
                     t.requires_grad(beta);
  return t.record(
      std::move(out), needs,
      [x, gamma, beta, m, n, normalized = std::move(normalized),
       inv_std = std::move(inv_std)](Tape& tp, const Tensor& g, const Tensor&) {
        const Tensor& gv2 = tp.value(gamma);
        if (tp.requires_grad(gamma)) {
          Tensor& gg = tp.grad(gamma);
          for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
              gg[j] += g.at(i, j) * normalized.at(i, j);
            }
          }
        }
        if (tp.requires_grad(beta)) {
          Tensor& gb = tp.grad(beta);
          for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) gb[j] += g.at(i, j);
          }
        }
        if (tp.requires_grad(x)) {
          Tensor& gx = tp.grad(x);
          const double inv_n = 1.0 / static_cast<double>(n);
          for (std::size_t i = 0; i < m; ++i) {
            double mean_d = 0.0, mean_dx = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
              const double d = g.at(i, j) * gv2[j];
              mean_d += d;
              mean_dx += d * normalized.at(i, j);
            }
            mean_d *= inv_n;
            mean_dx *= inv_n;
            for (std::size_t j = 0; j < n; ++j) {
              const double d = g.at(i, j) * gv2[j];
              gx.at(i, j) +=
                  inv_std[i] * (d - mean_d - normalized.at(i, j) * mean_dx);
            }
          }
        }
      });
}

Var dropout(Var x, double rate) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw std::invalid_argument("dropout: rate must lie in [0, 1), got " +
                                std::to_string(rate));
  }
  Tape& t = *x.tape();
  if (!t.training() || rate == 0.0) return x;
  const double keep_scale = 1.0 / (1.0 - rate);
  Tensor mask(t.value(x).shape(), 0.0);
  for (double& m : mask.values()) {
    m = t.rng().uniform() >= rate ? keep_scale : 0.0;
  }
  Tensor out = t.value(x);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
  return t.record(std::move(out), t.requires_grad(x),
                  [x, mask = std::move(mask)](Tape& tp, const Tensor& g, const Tensor&) {
                    Tensor& gx = tp.grad(x);
                    for (std::size_t i = 0; i < g.size(); ++i) {
                      gx[i] += g[i] * mask[i];
                    }
                  });
}

double log_sum_exp(std::span<const double> values) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : values) mx = std::max(mx, v);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double v : values) s += std::exp(v - mx);
  return mx + std::log(s);
}

Tensor softmax_rows(const Tensor& x) {
  Tensor out = x;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto row = out.row_span(i);
    const double lse = log_sum_exp(row);
    for (double& v : row) v = std::exp(v - lse);
  }
  return out;
}

Var softmax_rows(Var x, bool causal) {
  Tape& t = *x.tape();
  const Tensor& xv = t.value(x);
  const std::size_t m = xv.rows(), n = xv.cols();
  if (causal && m != n) {
    throw std::invalid_argument("softmax_rows: causal mask needs a square "
                                "input, got " + xv.shape_string());
  }
  Tensor out = Tensor::matrix(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t width = causal ? i + 1 : n;
    auto in_row = xv.row_span(i).subspan(0, width);
    const double lse = log_sum_exp(in_row);
    for (std::size_t j = 0; j < width; ++j) {
      out.at(i, j) = std::exp(in_row[j] - lse);
    }
  }
  return t.record(std::move(out), t.requires_grad(x),
                  [x, m, n, causal](Tape& tp, const Tensor& g,
                                    const Tensor& y) {
                    Tensor& gx = tp.grad(x);
                    for (std::size_t i = 0; i < m; ++i) {
                      const std::size_t width = causal ? i + 1 : n;
                      double dot = 0.0;
                      for (std::size_t j = 0; j < width; ++j) {
                        dot += g.at(i, j) * y.at(i, j);
                      }
                      for (std::size_t j = 0; j < width; ++j) {
                        gx.at(i, j) += y.at(i, j) * (g.at(i, j) - dot);
                      }
                    }
                  });
}

Var log_softmax_rows(Var x) {
  Tape& t = *x.tape();
  const Tensor& xv = t.value(x);
  const std::size_t m = xv.rows(), n = xv.cols();
  Tensor out = xv;
  for (std::size_t i = 0; i < m; ++i) {
    auto row = out.row_span(i);
    const double lse = log_sum_exp(row);
    for (double& v : row) v -= lse;
  }
  return t.record(std::move(out), t.requires_grad(x),
                  [x, m, n](Tape& tp, const Tensor& g, const Tensor& y) {
                    Tensor& gx = tp.grad(x);
                    for (std::size_t i = 0; i < m; ++i) {
                      double gsum = 0.0;
                      for (std::size_t j = 0; j < n; ++j) gsum += g.at(i, j);
                      for (std::size_t j = 0; j < n; ++j) {
                        gx.at(i, j) += g.at(i, j) - std::exp(y.at(i, j)) * gsum;
                      }
                    }
                  });
}

Var cross_entropy(Var logits, std::span<const std::size_t> targets) {
  Tape& t = *logits.tape();
  const Tensor& lv = t.value(logits);
  const std::size_t m = lv.rows(), n = lv.cols();
  if (targets.size() != m) {
    throw std::invalid_argument("cross_entropy: " + std::to_string(m) +
                                " rows but " + std::to_string(targets.size()) +
                                " targets");
  }
  Tensor probs = Tensor::matrix(m, n);
  double loss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (targets[i] >= n) {
      throw std::invalid_argument("cross_entropy: target " +
                                  std::to_string(targets[i]) +
                                  " out of range for " + lv.shape_string());
    }
    auto row = lv.row_span(i);
    const double lse = log_sum_exp(row);
    loss += lse - row[targets[i]];
    for (std::size_t j = 0; j < n; ++j) probs.at(i, j) = std::exp(row[j] - lse);
  }
  loss /= static_cast<double>(m);
  std::vector<std::size_t> tgt(targets.begin(), targets.end());
  return t.record(
      Tensor::scalar(loss), t.requires_grad(logits),
      [logits, m, n, probs = std::move(probs), tgt = std::move(tgt)](
          Tape& tp, const Tensor& g, const Tensor&) {
        Tensor& gl = tp.grad(logits);
        const double s = g[0] / static_cast<double>(m);
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            const double onehot = j == tgt[i] ? 1.0 : 0.0;
            gl.at(i, j) += s * (probs.at(i, j) - onehot);
          }
        }
      });
}

Var concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: no inputs");
  Tape& t = *parts[0].tape();
  const std::size_t m = t.value(parts[0]).rows();
  std::vector<std::size_t> offsets;
  std::size_t total = 0;
  bool needs = false;
  for (const Var& p : parts) {
    same_tape(parts[0], p, "concat_cols");
    const Tensor& pv = t.value(p);
    if (pv.rows() != m) shape_error("concat_cols", t.value(parts[0]), pv);
    offsets.push_back(total);
    total += pv.cols();
    needs = needs || t.requires_grad(p);
  }
  Tensor out = Tensor::matrix(m, total);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const Tensor& pv = t.value(parts[p]);
    for (std::size_t i = 0; i < m; ++i) {
      std::copy_n(pv.row_span(i).data(), pv.cols(),
                  out.row_span(i).data() + offsets[p]);
    }
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return t.record(std::move(out), needs,
                  [inputs = std::move(inputs), offsets = std::move(offsets),
                   m](Tape& tp, const Tensor& g, const Tensor&) {
                    for (std::size_t p = 0; p < inputs.size(); ++p) {
                      if (!tp.requires_grad(inputs[p])) continue;
                      Tensor& gp = tp.grad(inputs[p]);
                      const std::size_t w = gp.cols();
                      for (std::size_t i = 0; i < m; ++i) {
                        for (std::size_t j = 0; j < w; ++j) {
                          gp.at(i, j) += g.at(i, offsets[p] + j);
                        }
                      }
                    }
                  });
}

Var slice_cols(Var a, std::size_t begin, std::size_t end) {
  Tape& t = *a.tape();
  const Tensor& av = t.value(a);
  if (begin > end || end > av.cols()) {
    throw std::invalid_argument("slice_cols: range [" + std::to_string(begin) +
                                ", " + std::to_string(end) +
                                ") out of bounds for " + av.shape_string());
  }
  const std::size_t m = av.rows(), w = end - begin;
  Tensor out = Tensor::matrix(m, w);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < w; ++j) out.at(i, j) = av.at(i, begin + j);
  }
  return t.record(std::move(out), t.requires_grad(a),
                  [a, begin, m, w](Tape& tp, const Tensor& g, const Tensor&) {
                    Tensor& ga = tp.grad(a);
                    for (std::size_t i = 0; i < m; ++i) {
                      for (std::size_t j = 0; j < w; ++j) {
                        ga.at(i, begin + j) += g.at(i, j);
                      }
                    }
                  });
}

Var slice_rows(Var a, std::size_t begin, std::size_t end) {
  Tape& t = *a.tape();
  const Tensor& av = t.value(a);
  if (begin > end || end > av.rows()) {
    throw std::invalid_argument("slice_rows: range [" + std::to_string(begin) +
                                ", " + std::to_string(end) +
                                ") out of bounds for " + av.shape_string());
  }
  const std::size_t n = av.cols();
  Tensor out = Tensor::matrix(end - begin, n);
  std::copy(av.data() + begin * n, av.data() + end * n, out.data());
  return t.record(std::move(out), t.requires_grad(a),
                  [a, begin, n](Tape& tp, const Tensor& g, const Tensor&) {
                    Tensor& ga = tp.grad(a);
                    for (std::size_t i = 0; i < g.size(); ++i) {
                      ga[begin * n + i] += g[i];
                    }
                  });
}

Var gather_rows(Var table, std::span<const std::size_t> indices) {
  Tape& t = *table.tape();
  const Tensor& tv = t.value(table);
  const std::size_t n = tv.cols();
  Tensor out = Tensor::matrix(indices.size(), n);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= tv.rows()) {
      throw std::invalid_argument("gather_rows: index " +
                                  std::to_string(indices[i]) +
                                  " out of range for " + tv.shape_string());
    }
    std::copy_n(tv.row_span(indices[i]).data(), n, out.row_span(i).data());
  }
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  return t.record(std::move(out), t.requires_grad(table),
                  [table, n, idx = std::move(idx)](Tape& tp, const Tensor& g,
                                                   const Tensor&) {
                    Tensor& gt = tp.grad(table);
                    for (std::size_t i = 0; i < idx.size(); ++i) {
                      for (std::size_t j = 0; j < n; ++j) {
                        gt.at(idx[i], j) += g.at(i, j);
                      }
                    }
                  });
}

Var l2_normalize_rows(Var x, double eps) {
  Tape& t = *x.tape();
  const Tensor& xv = t.value(x);
  const std::size_t m = xv.rows(), n = xv.cols();
  Tensor out = xv;
  std::vector<double> norms(m);
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (double v : xv.row_span(i)) s += v * v;
    norms[i] = std::max(std::sqrt(s), eps);
    for (double& v : out.row_span(i)) v /= norms[i];
  }
  return t.record(std::move(out), t.requires_grad(x),
                  [x, m, n, norms = std::move(norms)](
                      Tape& tp, const Tensor& g, const Tensor& y) {
                    Tensor& gx = tp.grad(x);
                    for (std::size_t i = 0; i < m; ++i) {
                      double dot = 0.0;
                      for (std::size_t j = 0; j < n; ++j) {
                        dot += g.at(i, j) * y.at(i, j);
                      }
                      for (std::size_t j = 0; j < n; ++j) {
                        gx.at(i, j) += (g.at(i, j) - y.at(i, j) * dot) / norms[i];
                      }
                    }
                  });
}

Var sum(Var a) {
  Tape& t = *a.tape();
  double s = 0.0;
  for (double v : t.value(a).values()) s += v;
  return t.record(Tensor::scalar(s), t.requires_grad(a),
                  [a](Tape& tp, const Tensor& g, const Tensor&) {
                    Tensor& ga = tp.grad(a);
                    for (double& v : ga.values()) v += g[0];
                  });
}

Var mean(Var a) {
  const double n = static_cast<double>(a.value().size());
  return scale(sum(a), 1.0 / n);
}

}  // namespace locemb::num
