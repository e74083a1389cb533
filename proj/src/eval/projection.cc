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

#include "locemb/eval/projection.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace locemb::eval {

Projection project_2d(const num::Tensor& embeddings) {
  const std::size_t n = embeddings.rows();
  const std::size_t d = embeddings.cols();
  if (n < 3 || d == 0) {
    throw std::invalid_argument("project_2d: need at least three embeddings");
  }
  Eigen::MatrixXd x(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) x(i, j) = embeddings.at(i, j);
  }
  x.rowwise() -= x.colwise().mean();
  const double denom = static_cast<double>(n - 1);
  Eigen::MatrixXd cov = (x.transpose() * x) / denom;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("project_2d: eigen decomposition failed");
  }
  Projection p;
  p.total_variance = cov.trace();
  p.components = num::Tensor::matrix(d, 2);
  p.coords = num::Tensor::matrix(n, 2);
  const double tol = 1e-12 * std::max(1.0, p.total_variance);
  for (int c = 0; c < 2 && c < static_cast<int>(d); ++c) {
    // Eigenvalues come in increasing order.
    const Eigen::Index col = static_cast<Eigen::Index>(d) - 1 - c;
    const double value = solver.eigenvalues()(col);
    if (value <= tol) continue;
    Eigen::VectorXd v = solver.eigenvectors().col(col);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    const Eigen::VectorXd proj = x * v;
    p.variance[c] = value;
    for (std::size_t j = 0; j < d; ++j) {
      p.components.at(j, static_cast<std::size_t>(c)) = v(static_cast<Eigen::Index>(j));
    }
    for (std::size_t i = 0; i < n; ++i) {
      p.coords.at(i, static_cast<std::size_t>(c)) = proj(static_cast<Eigen::Index>(i));
    }
  }
  return p;
}

std::string projection_svg(const Projection& p,
                           const std::vector<bool>& highlight,
                           const std::string& title) {
  const std::size_t n = p.coords.rows();
  if (highlight.size() != n) {
    throw std::invalid_argument("projection_svg: one label per point needed");
  }
  constexpr double kSize = 480.0, kMargin = 30.0;
  double lo[2] = {0.0, 0.0}, hi[2] = {0.0, 0.0};
  for (int c = 0; c < 2; ++c) {
    lo[c] = hi[c] = p.coords.at(0, static_cast<std::size_t>(c));
    for (std::size_t i = 0; i < n; ++i) {
      lo[c] = std::min(lo[c], p.coords.at(i, static_cast<std::size_t>(c)));
      hi[c] = std::max(hi[c], p.coords.at(i, static_cast<std::size_t>(c)));
    }
    if (hi[c] - lo[c] < 1e-12) {
      lo[c] -= 1.0;
      hi[c] += 1.0;
    }
  }
  auto sx = [&](double v) {
    return kMargin + (v - lo[0]) / (hi[0] - lo[0]) * (kSize - 2 * kMargin);
  };
  auto sy = [&](double v) {
    return kSize - kMargin - (v - lo[1]) / (hi[1] - lo[1]) * (kSize - 2 * kMargin);
  };
  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" "
      "viewBox=\"0 0 480 480\">\n<rect width=\"480\" height=\"480\" "
      "fill=\"white\"/>\n<text x=\"10\" y=\"18\" font-size=\"13\" "
      "font-family=\"sans-serif\">";
  for (char ch : title) {
    if (ch == '<') svg += "&lt;";
    else if (ch == '&') svg += "&amp;";
    else svg += ch;
  }
  svg += "</text>\n";
  char buf[160];
  // Seen points first so held-out ones are drawn on top.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < n; ++i) {
      if (highlight[i] != (pass == 1)) continue;
      std::snprintf(buf, sizeof(buf),
                    "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%s\" fill=\"%s\" "
                    "fill-opacity=\"0.8\"/>\n",
                    sx(p.coords.at(i, 0)), sy(p.coords.at(i, 1)),
                    highlight[i] ? "4" : "3",
                    highlight[i] ? "#d62728" : "#1f77b4");
      svg += buf;
    }
  }
  svg += "</svg>\n";
  return svg;
}

void write_projection(const std::filesystem::path& svg_path,
                      const std::filesystem::path& csv_path,
                      const Projection& p, const std::vector<std::string>& ids,
                      const std::vector<bool>& highlight,
                      const std::string& title) {
  if (ids.size() != p.coords.rows()) {
    throw std::invalid_argument("write_projection: one id per point needed");
  }
  std::ofstream svg(svg_path, std::ios::trunc);
  if (!svg) throw std::runtime_error("cannot open " + svg_path.string());
  svg << projection_svg(p, highlight, title);
  std::ofstream csv(csv_path, std::ios::trunc);
  if (!csv) throw std::runtime_error("cannot open " + csv_path.string());
  csv << "id,pc1,pc2,highlight\n";
  char buf[96];
  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%d\n", p.coords.at(i, 0),
                  p.coords.at(i, 1), highlight[i] ? 1 : 0);
    csv << ids[i] << buf;
  }
}

}  // namespace locemb::eval
