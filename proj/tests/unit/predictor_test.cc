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

#include <cmath>
#include <filesystem>

#include "gradcheck.h"
#include "locemb/num/ops.h"
#include "locemb/pred/embedder.h"
#include "locemb/pred/model.h"
#include "locemb/pred/train.h"

namespace locemb::pred {
namespace {

using mob::MobilitySequence;

mob::LocationIndex make_index(std::size_t k) {
  std::vector<mob::Location> locs;
  for (std::size_t i = 0; i < k; ++i) {
    locs.push_back({"l" + std::to_string(i), "", {double(i), 0.0}, {}});
  }
  return mob::LocationIndex(std::move(locs));
}

EmbedderHandle random_table(const mob::LocationIndex& index, std::size_t d,
                            bool frozen, std::uint64_t seed) {
  num::Rng rng(seed);
  EmbedderHandle h;
  h.kind = frozen ? EmbedderKind::kSkipgram : EmbedderKind::kLookup;
  h.frozen = frozen;
  h.table = num::Tensor::matrix(index.size(), d);
  for (double& x : h.table.values()) x = rng.normal();
  h.index_fingerprint = index.fingerprint();
  return h;
}

PredictorConfig small_config() {
  PredictorConfig c;
  c.layers = 2;
  c.heads = 2;
  c.ff_dim = 16;
  c.d_model = 16;
  c.max_context = 8;
  c.time_dim = 4;
  c.dow_dim = 3;
  c.user_dim = 4;
  c.dropout = 0.1;
  return c;
}

MobilitySequence seq(std::vector<std::size_t> ctx, std::size_t target,
                     std::string user = "u0", std::int64_t t0 = 1704067200) {
  MobilitySequence s;
  s.user = std::move(user);
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    s.context.push_back({"l" + std::to_string(ctx[i]),
                         t0 + static_cast<std::int64_t>(i) * 5000});
  }
  s.target = {"l" + std::to_string(target),
              t0 + static_cast<std::int64_t>(ctx.size()) * 5000};
  return s;
}

TEST(Predictor, DistributionCoversAllClassesAndSumsToOne) {
  const auto index = make_index(7);
  for (HeadKind head : {HeadKind::kFc, HeadKind::kTied}) {
    auto cfg = small_config();
    cfg.head = head;
    Predictor model(cfg, random_table(index, 6, false, 1), index, {"u0"}, 2);
    const auto p = model.forward(seq({1, 2, 3}, 4));
    ASSERT_EQ(p.size(), 7u);
    double total = 0.0;
    for (double x : p) {
      EXPECT_GE(x, 0.0);
      total += x;
    }
    EXPECT_NEAR(total, 1.0, 1e-6);
    EXPECT_EQ(model.forward(seq({1, 2, 3}, 4)), p);
  }
}

TEST(Predictor, ZeroHeadGivesUniform) {
  const auto index = make_index(5);
  Predictor model(small_config(), random_table(index, 6, false, 1), index,
                  {"u0"}, 3);
  model.params().mutable_value("head.w").fill(0.0);
  model.params().mutable_value("head.b").fill(0.0);
  for (double p : model.forward(seq({0, 1, 2}, 3))) EXPECT_DOUBLE_EQ(p, 0.2);
}

TEST(Predictor, CrossEntropyAnchors) {
  // Uniform prediction over K classes costs ln K; a certain correct
  // prediction costs 0.
  num::Tape tape;
  const std::size_t target[] = {1};
  for (std::size_t k : {2u, 5u, 40u}) {
    auto ce = num::cross_entropy(tape.constant(num::Tensor::matrix(1, k, 0.3)),
                                 target);
    EXPECT_NEAR(ce.value().item(), std::log(double(k)), 1e-12);
  }
  num::Tensor sure = num::Tensor::matrix(1, 4, -1e4);
  sure[1] = 1e4;
  EXPECT_EQ(num::cross_entropy(tape.constant(sure), target).value().item(), 0.0);
}

TEST(Predictor, RankedOrderAndTies) {
  const auto index = make_index(3);
  Predictor model(small_config(), random_table(index, 6, false, 1), index,
                  {"u0"}, 3);
  // Force logits (log 0.1, log 0.7, log 0.2) through the head bias.
  model.params().mutable_value("head.w").fill(0.0);
  auto& b = model.params().mutable_value("head.b");
  b[0] = std::log(0.1);
  b[1] = std::log(0.7);
  b[2] = std::log(0.2);
  const auto ranked = model.predict_ranked(seq({0, 1}, 2));
  EXPECT_EQ(ranked[0].first, 1u);
  EXPECT_EQ(ranked[1].first, 2u);
  EXPECT_EQ(ranked[2].first, 0u);
  const auto probs = model.forward(seq({0, 1}, 2));
  EXPECT_EQ(ranked[0].first, static_cast<std::size_t>(std::distance(
                                 probs.begin(),
                                 std::max_element(probs.begin(), probs.end()))));
  b[0] = 0.0;
  b[1] = 0.0;
  b[2] = -5.0;
  const auto tied = model.predict_ranked(seq({0, 1}, 2));
  EXPECT_EQ(tied[0].first, 0u);
  EXPECT_EQ(tied[1].first, 1u);
}

TEST(Predictor, TruncationMatchesPreTruncatedSuffix) {
  const auto index = make_index(10);
  auto cfg = small_config();
  cfg.max_context = 4;
  Predictor model(cfg, random_table(index, 6, false, 1), index, {"u0"}, 4);
  const auto long_seq = seq({0, 1, 2, 3, 4, 5, 6, 7}, 8);
  MobilitySequence suffix = long_seq;
  suffix.context.erase(suffix.context.begin(), suffix.context.begin() + 4);
  EXPECT_EQ(model.forward(long_seq), model.forward(suffix));
  EXPECT_EQ(model.encode(long_seq).locations,
            (std::vector<std::size_t>{4, 5, 6, 7}));
}

TEST(Predictor, RejectsBadInput) {
  const auto index = make_index(4);
  auto cfg = small_config();
  cfg.heads = 3;
  EXPECT_THROW(Predictor(cfg, random_table(index, 6, false, 1), index, {}, 1),
               std::invalid_argument);
  EXPECT_THROW(Predictor(small_config(), random_table(make_index(3), 6, false, 1),
                         index, {}, 1),
               std::invalid_argument);
  Predictor model(small_config(), random_table(index, 6, false, 1), index, {}, 1);
  EXPECT_THROW(model.encode(seq({0, 9}, 1)), std::out_of_range);
  EXPECT_THROW(model.encode(seq({}, 1)), std::invalid_argument);
}

TEST(Predictor, GradientCheckAtReducedSize) {
  const auto index = make_index(6);
  for (HeadKind head : {HeadKind::kFc, HeadKind::kTied}) {
    auto cfg = small_config();
    cfg.head = head;
    cfg.dropout = 0.0;
    Predictor model(cfg, random_table(index, 5, false, 7), index, {"u0", "u1"},
                    8);
    const std::vector<EncodedSequence> batch = {
        model.encode(seq({0, 1, 2, 3}, 4, "u0")),
        model.encode(seq({5, 3, 1}, 0, "u1", 1704100000))};
    const auto result = testing::check_gradients(
        model.params(), [&](num::Tape& tape, const num::ParameterStore& store) {
          // Rebind the model to the perturbed store.
          Predictor probe = model;
          probe.params() = store;
          num::Var total;
          for (const auto& s : batch) {
            const std::size_t t[] = {s.target};
            num::Var ce = num::cross_entropy(probe.logits(tape, s), t);
            total = total.valid() ? num::add(total, ce) : ce;
          }
          return total;
        },
        1e-5, 24);
    EXPECT_LT(result.max_relative_error, 1e-4)
        << to_string(head) << " " << result.worst_parameter;
  }
}

// A user alternating strictly between two locations.
std::vector<MobilitySequence> alternating(std::size_t count, std::size_t skip) {
  std::vector<MobilitySequence> out;
  for (std::size_t i = skip; i < skip + count; ++i) {
    std::vector<std::size_t> ctx;
    for (std::size_t k = 0; k < 5; ++k) ctx.push_back((i + k) % 2 == 0 ? 0 : 1);
    out.push_back(seq(ctx, (i + 5) % 2 == 0 ? 0 : 1, "u0",
                      1704067200 + static_cast<std::int64_t>(i) * 3600));
  }
  return out;
}

TEST(Train, AlternatingRoutineIsLearned) {
  const auto index = make_index(6);
  Predictor model(small_config(), random_table(index, 6, false, 1), index,
                  {"u0"}, 9);
  const auto train_set = alternating(64, 0);
  const auto val_set = alternating(16, 64);
  const auto test_set = alternating(40, 80);
  TrainOptions opts;
  opts.batch_size = 16;
  opts.max_epochs = 30;
  opts.learning_rate = 3e-3;
  opts.seed = 5;
  const auto report = train(model, train_set, val_set, opts);
  EXPECT_LT(report.best_val_loss, report.history.front().val_loss);
  std::size_t hits = 0;
  for (const auto& s : test_set) {
    hits += model.predict_ranked(s)[0].first == index.index_of(s.target.location);
  }
  EXPECT_GT(double(hits) / double(test_set.size()), 0.95);
}

TEST(Train, FrozenEmbedderIsUntouched) {
  const auto index = make_index(6);
  const auto handle = random_table(index, 6, true, 3);
  auto cfg = small_config();
  cfg.head = HeadKind::kTied;
  Predictor model(cfg, handle, index, {"u0"}, 9);
  TrainOptions opts;
  opts.batch_size = 8;
  opts.max_epochs = 3;
  train(model, alternating(24, 0), alternating(8, 24), opts);
  EXPECT_EQ(model.embedding_table(), handle.table);
  EXPECT_FALSE(model.params().trainable("emb.table"));
}

TEST(Train, SerialAndParallelAreBitIdentical) {
  const auto index = make_index(6);
  const auto handle = random_table(index, 6, false, 3);
  Predictor a(small_config(), handle, index, {"u0"}, 9);
  Predictor b = a;
  TrainOptions opts;
  opts.batch_size = 20;
  opts.chunk_size = 3;
  opts.max_epochs = 2;
  opts.exec = num::kernels::Exec::kSerial;
  const auto ra = train(a, alternating(50, 0), alternating(10, 50), opts);
  opts.exec = num::kernels::Exec::kParallel;
  const auto rb = train(b, alternating(50, 0), alternating(10, 50), opts);
  EXPECT_TRUE(a.params().same_values(b.params()));
  ASSERT_EQ(ra.history.size(), rb.history.size());
  for (std::size_t i = 0; i < ra.history.size(); ++i) {
    EXPECT_EQ(ra.history[i].train_loss, rb.history[i].train_loss);
    EXPECT_EQ(ra.history[i].val_loss, rb.history[i].val_loss);
  }
  const auto seqs = alternating(30, 0);
  EXPECT_EQ(a.predict_batch(seqs, num::kernels::Exec::kSerial),
            a.predict_batch(seqs, num::kernels::Exec::kParallel));
}

TEST(Train, EarlyStoppingRestoresBestEpoch) {
  const auto index = make_index(6);
  Predictor model(small_config(), random_table(index, 6, false, 1), index,
                  {"u0"}, 9);
  TrainOptions opts;
  opts.batch_size = 8;
  opts.max_epochs = 40;
  opts.patience = 2;
  opts.learning_rate = 0.05;  // Large enough to overshoot.
  std::vector<EpochRecord> logged;
  const auto report = train(model, alternating(24, 0), alternating(8, 24), opts,
                            [&](const EpochRecord& r) { logged.push_back(r); });
  EXPECT_EQ(logged.size(), report.history.size());
  double best = 1e300;
  for (const auto& r : report.history) best = std::min(best, r.val_loss);
  EXPECT_EQ(report.best_val_loss, best);
  EXPECT_NEAR(mean_cross_entropy(model, alternating(8, 24),
                                 num::kernels::Exec::kSerial),
              best, 1e-12);
  EXPECT_EQ(to_json_line({1, 0.5, 0.25}),
            "{\"epoch\":1,\"train_loss\":0.5,\"val_loss\":0.25}");
}

TEST(Train, RejectsEmptySplits) {
  const auto index = make_index(6);
  Predictor model(small_config(), random_table(index, 6, false, 1), index,
                  {"u0"}, 9);
  EXPECT_THROW(train(model, {}, alternating(4, 0), {}), std::invalid_argument);
  EXPECT_THROW(train(model, alternating(4, 0), {}, {}), std::invalid_argument);
}

TEST(Checkpoint, PredictorRoundTrip) {
  const auto index = make_index(6);
  auto cfg = small_config();
  cfg.head = HeadKind::kTied;
  Predictor model(cfg, random_table(index, 6, true, 1), index, {"u0", "u1"}, 9);
  const auto path = std::filesystem::temp_directory_path() / "locemb_pred.ck";
  model.save(path);
  const auto back = Predictor::load(path, index);
  EXPECT_EQ(back.config(), cfg);
  EXPECT_EQ(back.users(), model.users());
  EXPECT_EQ(back.forward(seq({0, 1, 2}, 3, "u1")),
            model.forward(seq({0, 1, 2}, 3, "u1")));
  EXPECT_THROW(Predictor::load(path, make_index(7)), std::runtime_error);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace locemb::pred
