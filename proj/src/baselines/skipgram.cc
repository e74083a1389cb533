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

#include "locemb/baselines/skipgram.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "locemb/num/adam.h"
#include "locemb/num/rng.h"

namespace locemb::baselines {
namespace {

// log(sigmoid(x)) without overflow.
double log_sigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace

void SkipgramOptions::validate() const {
  if (dimension == 0 || window == 0 || negatives == 0 || epochs == 0 ||
      batch_size == 0 || !(learning_rate > 0.0)) {
    throw std::invalid_argument("skipgram: options must be positive");
  }
}

std::vector<Sentence> user_sentences(
    std::span<const mob::MobilitySequence> sequences,
    const mob::LocationIndex& index) {
  std::map<std::string, std::map<std::pair<std::int64_t, std::size_t>, int>>
      visits;
  for (const auto& s : sequences) {
    auto& v = visits[s.user];
    for (const auto& c : s.context) v[{c.time, index.index_of(c.location)}];
    v[{s.target.time, index.index_of(s.target.location)}];
  }
  std::vector<Sentence> out;
  for (const auto& [user, v] : visits) {
    Sentence sentence;
    for (const auto& [key, unused] : v) sentence.push_back(key.second);
    out.push_back(std::move(sentence));
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> skipgram_pairs(
    const Sentence& sentence, std::size_t window) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    const std::size_t lo = i >= window ? i - window : 0;
    const std::size_t hi = std::min(sentence.size() - 1, i + window);
    for (std::size_t j = lo; j <= hi; ++j) {
      if (j != i) out.emplace_back(sentence[i], sentence[j]);
    }
  }
  return out;
}

double sgns_loss(num::ParameterStore& store,
                 std::span<const SgnsExample> examples, bool grads) {
  if (examples.empty()) return 0.0;
  const num::Tensor& in = store.value("in");
  const num::Tensor& out = store.value("out");
  num::Tensor* g_in = grads ? &store.grad_buffer("in") : nullptr;
  num::Tensor* g_out = grads ? &store.grad_buffer("out") : nullptr;
  const double inv = 1.0 / static_cast<double>(examples.size());
  double loss = 0.0;
  for (const auto& ex : examples) {
    const auto u = in.row_span(ex.center);
    auto term = [&](std::size_t word, double label) {
      const auto v = out.row_span(word);
      const double s = dot(u, v);
      // d/ds of -log sigmoid(+-s) is sigmoid(s) - label.
      loss -= label > 0.0 ? log_sigmoid(s) : log_sigmoid(-s);
      if (grads) {
        const double g = (sigmoid(s) - label) * inv;
        axpy(g, v, g_in->row_span(ex.center));
        axpy(g, u, g_out->row_span(word));
      }
    };
    term(ex.context, 1.0);
    for (std::size_t k : ex.negatives) term(k, 0.0);
  }
  return loss * inv;
}

SkipgramResult skipgram_pretrain(std::span<const Sentence> sentences,
                                 const mob::LocationIndex& index,
                                 const SkipgramOptions& options) {
  options.validate();
  const std::size_t vocab_size = index.size();
  std::vector<double> counts(vocab_size, 0.0);
  for (const auto& s : sentences) {
    for (std::size_t w : s) {
      if (w >= vocab_size) {
        throw std::out_of_range("skipgram: class index out of range");
      }
      counts[w] += 1.0;
    }
  }
  SkipgramResult result;
  for (std::size_t w = 0; w < vocab_size; ++w) {
    if (counts[w] > 0.0) result.vocabulary.push_back(w);
  }
  if (result.vocabulary.size() < 2) {
    throw std::invalid_argument(
        "skipgram: corpus vocabulary needs at least two locations, got " +
        std::to_string(result.vocabulary.size()));
  }
  std::vector<double> cumulative;
  double total = 0.0;
  for (std::size_t w : result.vocabulary) {
    total += std::pow(counts[w], 0.75);
    cumulative.push_back(total);
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& s : sentences) {
    const auto p = skipgram_pairs(s, options.window);
    pairs.insert(pairs.end(), p.begin(), p.end());
  }

  const std::size_t d = options.dimension;
  num::Rng init(num::mix_seed(options.seed, 0x5eed));
  num::ParameterStore store;
  num::Tensor in = num::Tensor::matrix(vocab_size, d);
  const double bound = 0.5 / static_cast<double>(d);
  for (double& x : in.values()) x = init.uniform(-bound, bound);
  store.add("in", std::move(in));
  store.add("out", num::Tensor::matrix(vocab_size, d));

  num::Adam adam({.learning_rate = options.learning_rate});
  std::vector<SgnsExample> batch;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    num::Rng rng(num::mix_seed(options.seed, epoch + 1));
    rng.shuffle(std::span<std::pair<std::size_t, std::size_t>>(pairs));
    auto negative = [&](std::size_t positive) {
      for (;;) {
        const double u = rng.uniform() * total;
        const auto pos = static_cast<std::size_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), u) -
            cumulative.begin());
        const std::size_t w =
            result.vocabulary[std::min(pos, cumulative.size() - 1)];
        if (w != positive) return w;
      }
    };
    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < pairs.size();
         begin += options.batch_size) {
      const std::size_t end = std::min(pairs.size(), begin + options.batch_size);
      batch.clear();
      for (std::size_t k = begin; k < end; ++k) {
        SgnsExample ex{pairs[k].first, pairs[k].second, {}};
        for (std::size_t n = 0; n < options.negatives; ++n) {
          ex.negatives.push_back(negative(ex.context));
        }
        batch.push_back(std::move(ex));
      }
      store.zero_grads();
      loss_sum += sgns_loss(store, batch, true) *
                  static_cast<double>(end - begin);
      adam.step(store);
    }
    result.epoch_losses.push_back(
        pairs.empty() ? 0.0 : loss_sum / static_cast<double>(pairs.size()));
  }
  result.handle.kind = pred::EmbedderKind::kSkipgram;
  result.handle.frozen = true;
  result.handle.table = store.value("in");
  result.handle.index_fingerprint = index.fingerprint();
  result.output_vectors = store.value("out");
  return result;
}

SkipgramResult skipgram_pretrain(
    std::span<const mob::MobilitySequence> sequences,
    const mob::LocationIndex& index, const SkipgramOptions& options) {
  const auto sentences = user_sentences(sequences, index);
  return skipgram_pretrain(std::span<const Sentence>(sentences), index,
                           options);
}

}  // namespace locemb::baselines
