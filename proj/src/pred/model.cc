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

#include "locemb/pred/model.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "locemb/mob/time.h"
#include "locemb/num/layers.h"
#include "locemb/num/ops.h"

namespace locemb::pred {
namespace {

std::string layer(std::size_t i, const char* part) {
  return "layer" + std::to_string(i) + "." + part;
}

void add_normal_table(num::ParameterStore& store, const std::string& name,
                      std::size_t rows, std::size_t cols, num::Rng& rng) {
  num::Tensor t = num::Tensor::matrix(rows, cols);
  for (double& x : t.values()) x = rng.normal();
  store.add(name, std::move(t));
}

const std::string& field(const num::Metadata& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) {
    throw std::runtime_error("predictor checkpoint lacks '" + key + "'");
  }
  return it->second;
}

}  // namespace

std::string to_string(HeadKind kind) {
  return kind == HeadKind::kFc ? "fc" : "tied";
}

HeadKind parse_head_kind(const std::string& text) {
  if (text == "fc") return HeadKind::kFc;
  if (text == "tied") return HeadKind::kTied;
  throw std::invalid_argument("unknown head kind '" + text + "'");
}

void PredictorConfig::validate() const {
  if (layers == 0 || heads == 0 || ff_dim == 0 || d_model == 0 ||
      max_context == 0 || time_dim == 0 || dow_dim == 0 || user_dim == 0) {
    throw std::invalid_argument("predictor: sizes must be positive");
  }
  if (d_model % heads != 0) {
    throw std::invalid_argument("predictor: d_model " +
                                std::to_string(d_model) +
                                " is not divisible by " +
                                std::to_string(heads) + " heads");
  }
  if (dropout < 0.0 || dropout >= 1.0) {
    throw std::invalid_argument("predictor: dropout must lie in [0, 1)");
  }
}

num::Tensor positional_encoding(std::size_t length, std::size_t width) {
  num::Tensor pe = num::Tensor::matrix(length, width);
  for (std::size_t pos = 0; pos < length; ++pos) {
    for (std::size_t i = 0; i < width; ++i) {
      const double freq =
          std::pow(10000.0, -static_cast<double>(i - i % 2) /
                                static_cast<double>(width));
      const double angle = static_cast<double>(pos) * freq;
      pe.at(pos, i) = (i % 2 == 0) ? std::sin(angle) : std::cos(angle);
    }
  }
  return pe;
}

Predictor::Predictor(const PredictorConfig& config,
                     const EmbedderHandle& embedder,
                     const mob::LocationIndex& index,
                     std::vector<std::string> users, std::uint64_t seed)
    : config_(config),
      index_(index),
      users_(std::move(users)),
      embedder_kind_(embedder.kind),
      embedder_frozen_(embedder.frozen) {
  config_.validate();
  if (embedder.table.rows() != index.size() || embedder.table.cols() == 0) {
    throw std::invalid_argument(
        "Predictor: embedder table " + embedder.table.shape_string() +
        " does not have one row per location (" +
        std::to_string(index.size()) + ")");
  }
  if (!embedder.index_fingerprint.empty() &&
      embedder.index_fingerprint != index.fingerprint()) {
    throw std::invalid_argument(
        "Predictor: embedder rows follow a different LocationIndex");
  }
  std::sort(users_.begin(), users_.end());
  users_.erase(std::unique(users_.begin(), users_.end()), users_.end());
  for (std::size_t i = 0; i < users_.size(); ++i) user_rows_[users_[i]] = i + 1;

  num::Rng rng(seed);
  const std::size_t d_e = embedder.table.cols();
  params_.add("emb.table", embedder.table, !embedder.frozen);
  add_normal_table(params_, "feat.hour", 24, config_.time_dim, rng);
  add_normal_table(params_, "feat.weekday", 7, config_.dow_dim, rng);
  add_normal_table(params_, "feat.user", users_.size() + 1, config_.user_dim,
                   rng);
  num::init_linear(params_, "in",
                   d_e + config_.time_dim + config_.dow_dim + config_.user_dim,
                   config_.d_model, rng);
  for (std::size_t l = 0; l < config_.layers; ++l) {
    num::init_multi_head_attention(params_, layer(l, "attn"), config_.d_model,
                                   rng);
    num::init_layer_norm(params_, layer(l, "ln1"), config_.d_model);
    num::init_linear(params_, layer(l, "ff1"), config_.d_model,
                     config_.ff_dim, rng);
    num::init_linear(params_, layer(l, "ff2"), config_.ff_dim,
                     config_.d_model, rng);
    num::init_layer_norm(params_, layer(l, "ln2"), config_.d_model);
  }
  const std::size_t head_out =
      config_.head == HeadKind::kFc ? index.size() : d_e;
  num::init_linear(params_, "head", config_.d_model, head_out, rng);
}

EncodedSequence Predictor::encode(const mob::MobilitySequence& seq) const {
  if (seq.context.empty()) {
    throw std::invalid_argument("Predictor: sequence " +
                                std::to_string(seq.id) + " has no context");
  }
  EncodedSequence out;
  const std::size_t begin = seq.context.size() > config_.max_context
                                ? seq.context.size() - config_.max_context
                                : 0;
  for (std::size_t i = begin; i < seq.context.size(); ++i) {
    const auto& v = seq.context[i];
    out.locations.push_back(index_.index_of(v.location));
    out.hours.push_back(static_cast<std::size_t>(mob::hour_of_day(v.time)));
    out.weekdays.push_back(static_cast<std::size_t>(mob::day_of_week(v.time)));
  }
  auto it = user_rows_.find(seq.user);
  out.user = it == user_rows_.end() ? 0 : it->second;
  out.target = index_.index_of(seq.target.location);
  return out;
}

num::Var Predictor::logits(num::Tape& tape, const EncodedSequence& seq) const {
  const std::size_t n = seq.locations.size();
  const double p = config_.dropout;
  num::Var table = tape.param(params_, "emb.table");
  const std::vector<std::size_t> user_rows(n, seq.user);
  const num::Var parts[] = {
      num::gather_rows(table, seq.locations),
      num::gather_rows(tape.param(params_, "feat.hour"), seq.hours),
      num::gather_rows(tape.param(params_, "feat.weekday"), seq.weekdays),
      num::gather_rows(tape.param(params_, "feat.user"), user_rows)};
  num::Var x = num::linear(tape, params_, "in", num::concat_cols(parts));
  x = num::add(x, tape.constant(positional_encoding(n, config_.d_model)));
  x = num::dropout(x, p);
  for (std::size_t l = 0; l < config_.layers; ++l) {
    num::Var a = num::multi_head_self_attention(
        tape, params_, layer(l, "attn"), x, config_.heads, true, p);
    x = num::layer_norm(tape, params_, layer(l, "ln1"),
                        num::add(x, num::dropout(a, p)));
    num::Var f = num::relu(num::linear(tape, params_, layer(l, "ff1"), x));
    f = num::linear(tape, params_, layer(l, "ff2"), num::dropout(f, p));
    x = num::layer_norm(tape, params_, layer(l, "ln2"),
                        num::add(x, num::dropout(f, p)));
  }
  num::Var h = num::slice_rows(x, n - 1, n);
  num::Var out = num::linear(tape, params_, "head", h);
  if (config_.head == HeadKind::kTied) out = num::matmul_nt(out, table);
  return out;
}

std::vector<double> Predictor::forward(const mob::MobilitySequence& seq) const {
  num::Tape tape;
  return num::softmax_rows(logits(tape, encode(seq)).value()).storage();
}

std::vector<std::pair<std::size_t, double>> Predictor::predict_ranked(
    const mob::MobilitySequence& seq) const {
  const auto probs = forward(seq);
  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) out.emplace_back(i, probs[i]);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  return out;
}

num::Tensor Predictor::predict_batch(std::span<const mob::MobilitySequence> seqs,
                                     num::kernels::Exec exec) const {
  num::Tensor out = num::Tensor::matrix(seqs.size(), num_classes());
  const auto n = static_cast<std::ptrdiff_t>(seqs.size());
  auto one = [&](std::ptrdiff_t i) {
    const auto probs = forward(seqs[static_cast<std::size_t>(i)]);
    std::copy(probs.begin(), probs.end(),
              out.row_span(static_cast<std::size_t>(i)).begin());
  };
  if (exec == num::kernels::Exec::kParallel) {
    // Exceptions must not escape an OpenMP region.
    std::string error;
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        one(i);
      } catch (const std::exception& e) {
#pragma omp critical(locemb_predict_batch)
        if (error.empty()) error = e.what();
      }
    }
    if (!error.empty()) throw std::runtime_error(error);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) one(i);
  }
  return out;
}

void Predictor::save(const std::filesystem::path& path,
                     num::Metadata metadata) const {
  metadata["kind"] = "predictor";
  metadata["layers"] = std::to_string(config_.layers);
  metadata["heads"] = std::to_string(config_.heads);
  metadata["ff_dim"] = std::to_string(config_.ff_dim);
  std::ostringstream dropout;
  dropout.precision(17);
  dropout << config_.dropout;
  metadata["dropout"] = dropout.str();
  metadata["d_model"] = std::to_string(config_.d_model);
  metadata["max_context"] = std::to_string(config_.max_context);
  metadata["time_dim"] = std::to_string(config_.time_dim);
  metadata["dow_dim"] = std::to_string(config_.dow_dim);
  metadata["user_dim"] = std::to_string(config_.user_dim);
  metadata["head"] = to_string(config_.head);
  metadata["embedder"] = to_string(embedder_kind_);
  metadata["embedder_frozen"] = embedder_frozen_ ? "1" : "0";
  metadata["location_index_sha256"] = index_.fingerprint();
  std::string users;
  for (const auto& u : users_) users += u + "\n";
  metadata["users"] = users;
  num::save_checkpoint(path, params_, metadata);
}

Predictor Predictor::load(const std::filesystem::path& path,
                          const mob::LocationIndex& index,
                          num::Metadata* metadata) {
  num::Checkpoint ck = num::load_checkpoint(path);
  const auto& m = ck.metadata;
  if (m.find("kind") == m.end() || m.at("kind") != "predictor") {
    throw std::runtime_error(path.string() + " is not a predictor checkpoint");
  }
  if (field(m, "location_index_sha256") != index.fingerprint()) {
    throw std::runtime_error(
        "predictor checkpoint " + path.string() +
        " was trained against a different LocationIndex");
  }
  Predictor p;
  p.config_.layers = std::stoul(field(m, "layers"));
  p.config_.heads = std::stoul(field(m, "heads"));
  p.config_.ff_dim = std::stoul(field(m, "ff_dim"));
  p.config_.dropout = std::stod(field(m, "dropout"));
  p.config_.d_model = std::stoul(field(m, "d_model"));
  p.config_.max_context = std::stoul(field(m, "max_context"));
  p.config_.time_dim = std::stoul(field(m, "time_dim"));
  p.config_.dow_dim = std::stoul(field(m, "dow_dim"));
  p.config_.user_dim = std::stoul(field(m, "user_dim"));
  p.config_.head = parse_head_kind(field(m, "head"));
  p.config_.validate();
  p.embedder_kind_ = parse_embedder_kind(field(m, "embedder"));
  p.embedder_frozen_ = field(m, "embedder_frozen") == "1";
  p.index_ = index;
  std::istringstream users(field(m, "users"));
  for (std::string u; std::getline(users, u);) p.users_.push_back(u);
  for (std::size_t i = 0; i < p.users_.size(); ++i) {
    p.user_rows_[p.users_[i]] = i + 1;
  }
  p.params_ = std::move(ck.params);
  if (metadata != nullptr) *metadata = m;
  return p;
}

}  // namespace locemb::pred
