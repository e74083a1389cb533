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
#include <fstream>
#include <vector>

#include "gradcheck.h"
#include "locemb/num/adam.h"
#include "locemb/num/checkpoint.h"
#include "locemb/num/layers.h"
#include "locemb/num/ops.h"

namespace locemb::num {
namespace {

Tensor random_matrix(Rng& rng, std::size_t r, std::size_t c,
                     double scale = 1.0) {
  Tensor t = Tensor::matrix(r, c);
  for (double& v : t.values()) v = rng.normal() * scale;
  return t;
}

TEST(Tensor, ShapeMustMatchValues) {
  EXPECT_THROW(Tensor({2, 3}, std::vector<double>(5)), std::invalid_argument);
  Tensor t({2, 3}, 1.5);
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.cols(), 3u);
  EXPECT_EQ(t.size(), 6u);
}

TEST(Ops, SoftmaxOfZerosIsUniform) {
  Tape tape;
  Var y = softmax_rows(tape.constant(Tensor::row({0, 0, 0})));
  for (double v : y.value().values()) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);
}

TEST(Ops, ReluClampsNegatives) {
  Tape tape;
  Var y = relu(tape.constant(Tensor::row({-1, 2})));
  EXPECT_EQ(y.value(), Tensor::row({0, 2}));
}

TEST(Ops, IdentityMatmul) {
  Rng rng(3);
  Tape tape;
  Tensor a = random_matrix(rng, 3, 3);
  Var y = matmul(tape.constant(Tensor::identity(3)), tape.constant(a));
  EXPECT_EQ(y.value(), a);
}

TEST(Ops, ShapeMismatchNamesOperationAndShapes) {
  Tape tape;
  Var a = tape.constant(Tensor::matrix(2, 3));
  Var b = tape.constant(Tensor::matrix(4, 5));
  try {
    matmul(a, b);
    FAIL() << "expected a shape error";
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("matmul"), std::string::npos);
    EXPECT_NE(msg.find("[2x3]"), std::string::npos);
    EXPECT_NE(msg.find("[4x5]"), std::string::npos);
  }
  EXPECT_THROW(add(a, b), std::invalid_argument);
}

TEST(Ops, SoftmaxRowsAreDistributions) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Tape tape;
    const std::size_t n = 1 + rng.below(9);
    Var y = softmax_rows(tape.constant(random_matrix(rng, n, n, 30.0)),
                         trial % 2 == 0);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (double v : y.value().row_span(i)) {
        EXPECT_GE(v, 0.0);
        s += v;
      }
      EXPECT_NEAR(s, 1.0, 1e-9);
    }
  }
}

TEST(Ops, CausalSoftmaxZeroesFuture) {
  Tape tape;
  Var y = softmax_rows(tape.constant(Tensor::matrix(3, 3)), true);
  EXPECT_DOUBLE_EQ(y.value().at(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(y.value().at(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(y.value().at(1, 1), 0.5);
  EXPECT_DOUBLE_EQ(y.value().at(1, 2), 0.0);
}

TEST(Ops, DropoutRules) {
  Tape eval_tape(Tape::Mode::kEval, 1);
  Var x = eval_tape.constant(Tensor::row({1, 2, 3}));
  EXPECT_EQ(dropout(x, 0.5).value(), x.value());
  EXPECT_THROW(dropout(x, 1.0), std::invalid_argument);
  EXPECT_THROW(dropout(x, -0.1), std::invalid_argument);

  Tape train_tape(Tape::Mode::kTrain, 1);
  Var ones = train_tape.constant(Tensor(Shape{1, 20000}, 1.0));
  Var y = dropout(ones, 0.25);
  double total = 0.0;
  for (double v : y.value().values()) {
    EXPECT_TRUE(v == 0.0 || std::abs(v - 1.0 / 0.75) < 1e-15);
    total += v;
  }
  EXPECT_NEAR(total / 20000.0, 1.0, 0.03);
}

TEST(Backward, LinearSumGradientIsBroadcastOfInput) {
  ParameterStore store;
  store.add("w", Tensor::from_rows({{0.3, -0.2}, {1.5, 0.7}}));
  Tape tape;
  Var x = tape.constant(Tensor::from_rows({{1}, {1}}));
  Var loss = sum(matmul(tape.param(store, "w"), x));
  tape.backward(loss);
  tape.accumulate_gradients(store);
  EXPECT_EQ(store.grad("w"), Tensor::from_rows({{1, 1}, {1, 1}}));
}

TEST(Backward, SoftmaxCrossEntropyAtUniformIsProbMinusOneHot) {
  ParameterStore store;
  store.add("logits", Tensor::row({0, 0, 0, 0}));
  const std::vector<std::size_t> target = {2};
  auto build = [&](Tape& tape, const ParameterStore& s) {
    return cross_entropy(tape.param(s, "logits"), target);
  };
  Tape tape;
  Var loss = build(tape, store);
  EXPECT_NEAR(loss.value().item(), std::log(4.0), 1e-15);
  tape.backward(loss);
  tape.accumulate_gradients(store);
  const Tensor expected = Tensor::row({0.25, 0.25, -0.75, 0.25});
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(store.grad("logits")[i], expected[i], 1e-15);
  }
  const auto fd = testing::check_gradients(store, build);
  EXPECT_LT(fd.max_relative_error, 1e-6);
}

TEST(Backward, UnreachableParametersGetZeroGradient) {
  ParameterStore store;
  store.add("used", Tensor::row({1, 2}));
  store.add("unused", Tensor::row({3, 4}));
  Tape tape;
  tape.backward(sum(tape.param(store, "used")));
  tape.accumulate_gradients(store);
  EXPECT_EQ(store.grad("unused"), Tensor::row({0, 0}));
  EXPECT_EQ(store.grad("used"), Tensor::row({1, 1}));
}

TEST(Backward, RejectsLossWithoutRecordedForward) {
  Tape tape;
  Var c = tape.constant(Tensor::scalar(1.0));
  EXPECT_THROW(tape.backward(c), std::logic_error);
  Tape other;
  Var v = other.variable(Tensor::row({1, 2}));
  EXPECT_THROW(other.backward(v), std::invalid_argument);  // not scalar
  Var s = sum(v);
  other.backward(s);
  EXPECT_THROW(other.backward(s), std::logic_error);
}

TEST(Backward, FrozenParametersAreConstants) {
  ParameterStore store;
  store.add("frozen", Tensor::row({1, 2}), /*trainable=*/false);
  store.add("live", Tensor::row({1, 1}));
  Tape tape;
  Var loss = sum(mul(tape.param(store, "frozen"), tape.param(store, "live")));
  tape.backward(loss);
  tape.accumulate_gradients(store);
  EXPECT_EQ(store.grad("live"), Tensor::row({1, 2}));
  EXPECT_EQ(store.grad("frozen"), Tensor::row({0, 0}));
}

// Every differentiable op, composed, against central differences.
TEST(Backward, CompositeModelMatchesFiniteDifferences) {
  Rng rng(7);
  ParameterStore store;
  init_linear(store, "in", 5, 8, rng);
  init_layer_norm(store, "ln", 8);
  init_multi_head_attention(store, "attn", 8, rng);
  init_linear(store, "head", 8, 6, rng);
  store.add("table", random_matrix(rng, 7, 5));
  // Perturb layer-norm parameters away from the identity init.
  for (double& v : store.mutable_value("ln.gamma").values()) {
    v += 0.3 * rng.normal();
  }
  const std::vector<std::size_t> idx = {3, 0, 6, 3};
  const std::vector<std::size_t> targets = {1, 5, 0, 2};
  auto build = [&](Tape& tape, const ParameterStore& s) {
    Var x = gather_rows(tape.param(s, "table"), idx);
    Var h = relu(linear(tape, s, "in", x));
    h = layer_norm(tape, s, "ln", h);
    h = add(h, multi_head_self_attention(tape, s, "attn", h, 2, true));
    Var t = transpose(slice_cols(h, 0, 4));
    h = add(h, concat_cols(std::vector<Var>{slice_cols(slice_rows(h, 0, 4), 4, 8), t}));
    h = l2_normalize_rows(h);
    Var logits = scale(linear(tape, s, "head", h), 3.0);
    Var lsm = log_softmax_rows(logits);
    return add(cross_entropy(logits, targets),
               scale(mean(sub(lsm, logits)), 0.1));
  };
  const auto result = testing::check_gradients(store, build);
  EXPECT_GT(result.checked, 300u);
  EXPECT_LT(result.max_relative_error, 1e-4) << result.worst_parameter;
}

TEST(Adam, ZeroGradientLeavesParametersUnchanged) {
  ParameterStore store;
  store.add("p", Tensor::row({0.5, -1.0}));
  store.zero_grads();
  Adam adam;
  adam.step(store);
  EXPECT_EQ(store.value("p"), Tensor::row({0.5, -1.0}));
}

TEST(Adam, FirstStepMovesByLearningRate) {
  for (double g : {0.3, -4.0, 1e-3}) {
    ParameterStore store;
    store.add("p", Tensor::scalar(2.0));
    store.grad_buffer("p")[0] = g;
    Adam adam;
    adam.step(store);
    const double expected = 1e-3 * std::abs(g) / (std::sqrt(g * g) + 1e-8);
    EXPECT_NEAR(std::abs(store.value("p")[0] - 2.0), expected, 1e-15);
    EXPECT_EQ(store.grad("p")[0], 0.0);
  }
}

TEST(Adam, ConstantGradientMovesMonotonically) {
  ParameterStore store;
  store.add("p", Tensor::scalar(0.0));
  Adam adam;
  double prev = 0.0;
  for (int i = 0; i < 2; ++i) {
    store.grad_buffer("p")[0] = 0.7;
    adam.step(store);
    EXPECT_LT(store.value("p")[0], prev);
    prev = store.value("p")[0];
  }
  EXPECT_EQ(adam.step_count(), 2);
}

TEST(Adam, MissingGradientIsRejected) {
  ParameterStore store;
  store.add("p", Tensor::scalar(0.0));
  Adam adam;
  EXPECT_THROW(adam.step(store), std::logic_error);
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    differs = differs || x != c.uniform();
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, FirstOutputsArePinned) {
  // std::mt19937_64 is fully specified by the standard; its 10000th output
  // for the default seed is fixed there.
  std::mt19937_64 ref;
  ref.discard(9999);
  EXPECT_EQ(ref(), 9981545732273789042ULL);
  Rng rng(5489);
  for (int i = 0; i < 9999; ++i) rng.next_u64();
  EXPECT_EQ(rng.next_u64(), 9981545732273789042ULL);
}

TEST(Rng, BelowIsInRangeAndCoversValues) {
  Rng rng(1);
  std::vector<int> seen(7, 0);
  for (int i = 0; i < 7000; ++i) ++seen[rng.below(7)];
  for (int c : seen) EXPECT_GT(c, 800);
  EXPECT_THROW(rng.below(0), std::invalid_argument);
}

TEST(Checkpoint, RoundTripIsExact) {
  Rng rng(9);
  ParameterStore store;
  for (int i = 0; i < 5; ++i) {
    const std::size_t r = 1 + rng.below(6), c = 1 + rng.below(6);
    store.add("p" + std::to_string(i), random_matrix(rng, r, c, 1e3),
              i % 2 == 0);
  }
  store.add("vec", Tensor({3}, {1e-300, -0.0, 12345.678}));
  const auto path =
      std::filesystem::temp_directory_path() / "locemb_ckpt_test.bin";
  save_checkpoint(path, store, {{"kind", "test"}, {"hash", "abc"}});
  const Checkpoint ck = load_checkpoint(path);
  EXPECT_TRUE(ck.params.same_values(store));
  for (const auto& name : store.names()) {
    EXPECT_EQ(ck.params.trainable(name), store.trainable(name));
    EXPECT_EQ(ck.params.value(name).shape(), store.value(name).shape());
  }
  EXPECT_EQ(ck.metadata.at("kind"), "test");
  std::filesystem::remove(path);
}

TEST(Checkpoint, RejectsForeignFiles) {
  const auto path =
      std::filesystem::temp_directory_path() / "locemb_not_ckpt.bin";
  {
    std::ofstream out(path);
    out << "hello world";
  }
  EXPECT_THROW(load_checkpoint(path), std::runtime_error);
  std::filesystem::remove(path);
}

TEST(Determinism, SeededInitialisationIsBitIdentical) {
  auto make = [] {
    Rng rng(2024);
    ParameterStore s;
    init_multi_head_attention(s, "a", 16, rng);
    return s;
  };
  EXPECT_TRUE(make().same_values(make()));
}

}  // namespace
}  // namespace locemb::num
