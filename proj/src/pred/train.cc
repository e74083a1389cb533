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

#include "locemb/pred/train.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "locemb/num/adam.h"
#include "locemb/num/ops.h"

namespace locemb::pred {
namespace {

// Runs body(i) for i in [0, n), in parallel when asked. The first
// exception thrown by any iteration is rethrown afterwards.
template <typename Body>
void for_each_index(std::size_t n, num::kernels::Exec exec, Body&& body) {
  if (exec == num::kernels::Exec::kSerial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::string error;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (const std::exception& e) {
#pragma omp critical(locemb_train_error)
      if (error.empty()) error = e.what();
    }
  }
  if (!error.empty()) throw std::runtime_error(error);
}

// Sum over the chunk of cross entropies, each scaled by 1/batch.
num::Var chunk_loss(num::Tape& tape, const Predictor& model,
                    std::span<const EncodedSequence> seqs, double inv_batch) {
  num::Var total;
  for (const auto& s : seqs) {
    const std::size_t target[] = {s.target};
    num::Var ce = num::cross_entropy(model.logits(tape, s), target);
    total = total.valid() ? num::add(total, ce) : ce;
  }
  return num::scale(total, inv_batch);
}

}  // namespace

void TrainOptions::validate() const {
  if (batch_size == 0 || max_epochs == 0 || patience == 0 || chunk_size == 0) {
    throw std::invalid_argument("train: batch size, epochs, patience and "
                                "chunk size must be positive");
  }
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("train: learning rate must be positive");
  }
}

std::string to_json_line(const EpochRecord& r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "{\"epoch\":%zu,\"train_loss\":%.17g,\"val_loss\":%.17g}",
                r.epoch, r.train_loss, r.val_loss);
  return buf;
}

double mean_cross_entropy(const Predictor& model,
                          std::span<const mob::MobilitySequence> seqs,
                          num::kernels::Exec exec) {
  if (seqs.empty()) {
    throw std::invalid_argument("mean_cross_entropy: no sequences");
  }
  std::vector<double> losses(seqs.size());
  for_each_index(seqs.size(), exec, [&](std::size_t i) {
    const auto enc = model.encode(seqs[i]);
    num::Tape tape;
    const std::size_t target[] = {enc.target};
    losses[i] =
        num::cross_entropy(model.logits(tape, enc), target).value().item();
  });
  double sum = 0.0;
  for (double l : losses) sum += l;
  return sum / static_cast<double>(seqs.size());
}

TrainReport train(Predictor& model,
                  std::span<const mob::MobilitySequence> train_set,
                  std::span<const mob::MobilitySequence> validation_set,
                  const TrainOptions& options, const EpochLogger& log) {
  options.validate();
  if (train_set.empty() || validation_set.empty()) {
    throw std::invalid_argument(
        "train: training and validation sets must be non-empty");
  }
  std::vector<EncodedSequence> encoded;
  encoded.reserve(train_set.size());
  for (const auto& s : train_set) encoded.push_back(model.encode(s));

  num::ParameterStore& params = model.params();
  const bool parallel = options.exec == num::kernels::Exec::kParallel;
  const std::size_t max_chunks =
      (options.batch_size + options.chunk_size - 1) / options.chunk_size;
  // Per-chunk gradient sinks; only their gradient buffers are used.
  std::vector<num::ParameterStore> sinks;
  if (parallel) sinks.assign(max_chunks, params);

  num::Adam adam({.learning_rate = options.learning_rate});
  TrainReport report;
  report.best_val_loss = std::numeric_limits<double>::infinity();
  num::ParameterStore best = params;
  std::size_t since_best = 0;
  std::vector<std::size_t> order(encoded.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 0; epoch < options.max_epochs; ++epoch) {
    const std::uint64_t epoch_seed = num::mix_seed(options.seed, epoch);
    num::Rng shuffle_rng(epoch_seed);
    shuffle_rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t begin = 0; begin < order.size();
         begin += options.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), begin + options.batch_size);
      const double inv_batch = 1.0 / static_cast<double>(end - begin);
      const std::size_t n_chunks =
          (end - begin + options.chunk_size - 1) / options.chunk_size;
      std::vector<double> chunk_losses(n_chunks);
      auto run_chunk = [&](std::size_t c, num::ParameterStore& sink) {
        const std::size_t lo = begin + c * options.chunk_size;
        const std::size_t hi = std::min(end, lo + options.chunk_size);
        std::vector<EncodedSequence> chunk;
        for (std::size_t k = lo; k < hi; ++k) chunk.push_back(encoded[order[k]]);
        num::Tape tape(num::Tape::Mode::kTrain,
                       num::mix_seed(epoch_seed, batch_index * 4096 + c));
        num::Var loss = chunk_loss(tape, model, chunk, inv_batch);
        tape.backward(loss);
        tape.accumulate_gradients(sink);
        chunk_losses[c] = loss.value().item();
      };
      if (parallel) {
        for_each_index(n_chunks, options.exec, [&](std::size_t c) {
          sinks[c].zero_grads();
          run_chunk(c, sinks[c]);
        });
        for (std::size_t c = 0; c < n_chunks; ++c) {
          params.add_grads_from(sinks[c]);
        }
      } else {
        for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c, params);
      }
      adam.step(params);
      for (double l : chunk_losses) {
        loss_sum += l * static_cast<double>(end - begin);
      }
    }
    EpochRecord record;
    record.epoch = epoch + 1;
    record.train_loss = loss_sum / static_cast<double>(order.size());
    record.val_loss = mean_cross_entropy(model, validation_set, options.exec);
    report.history.push_back(record);
    if (log) log(record);
    if (record.val_loss < report.best_val_loss) {
      report.best_val_loss = record.val_loss;
      report.best_epoch = record.epoch;
      best = params;
      since_best = 0;
    } else if (++since_best >= options.patience) {
      report.stopped_early = true;
      break;
    }
  }
  best.clear_grads();
  params = std::move(best);
  return report;
}

}  // namespace locemb::pred
