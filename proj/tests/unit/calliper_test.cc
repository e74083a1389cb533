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
#include <map>

#include "gradcheck.h"
#include "locemb/calliper/infonce.h"
#include "locemb/calliper/model.h"
#include "locemb/calliper/pretrain.h"
#include "locemb/calliper/text_embedder.h"
#include "locemb/mob/synth.h"

namespace locemb::calliper {
namespace {

// --- text embedders ---------------------------------------------------------

// Oracle for the hashed embedder written from its documented rule.
std::vector<double> hashed_oracle(const std::string& text, std::size_t dim) {
  std::string s = " ";
  for (char c : text) s += static_cast<char>(std::tolower(c));
  s += " ";
  std::vector<double> v(dim, 0.0);
  for (std::size_t i = 0; i + 2 < s.size(); ++i) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t k = i; k < i + 3; ++k) {
      h = (h ^ static_cast<unsigned char>(s[k])) * 0x100000001b3ull;
    }
    v[h % dim] += (h & (1ull << 63)) ? -1.0 : 1.0;
  }
  double n = 0.0;
  for (double x : v) n += x * x;
  for (double& x : v) x /= std::sqrt(n);
  return v;
}

TEST(HashedNgram, CoffeeShopMatchesOracle) {
  HashedNgramEmbedder emb(512);
  const auto v = emb.embed("Coffee Shop");
  ASSERT_EQ(v.size(), 512u);
  const auto expected = hashed_oracle("Coffee Shop", 512);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_DOUBLE_EQ(v[i], expected[i]);
  EXPECT_EQ(emb.embed("Coffee Shop"), v);
  EXPECT_EQ(emb.embed("coffee shop"), v);
  EXPECT_NE(emb.embed("Bookstore"), v);
}

TEST(HashedNgram, FnvKnownValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
}

TEST(HashedNgram, SharedTokenRaisesSimilarity) {
  HashedNgramEmbedder emb;
  auto cos = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  EXPECT_GT(cos(emb.embed("Old Oak cafe"), emb.embed("Blue River cafe")),
            cos(emb.embed("Old Oak cafe"), emb.embed("Blue River gym")));
}

TEST(Precomputed, LookupAndMissingText) {
  PrecomputedTextEmbedder emb({{"Cafe", {1.0, 2.0}}, {"Park", {3.0, 4.0}}});
  EXPECT_EQ(emb.dimension(), 2u);
  EXPECT_EQ(emb.embed("Park"), (std::vector<double>{3.0, 4.0}));
  try {
    emb.embed("Museum of Art");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("Museum of Art"), std::string::npos);
  }
  EXPECT_THROW(PrecomputedTextEmbedder({{"a", {1.0}}, {"b", {1.0, 2.0}}}),
               std::invalid_argument);
}

TEST(Precomputed, LoadsFile) {
  const auto path = std::filesystem::temp_directory_path() / "locemb_vec.csv";
  std::ofstream(path) << "\"Cafe, corner\",0.5,-1\nPark,1,2\n";
  const auto emb = PrecomputedTextEmbedder::load(path);
  EXPECT_EQ(emb.embed("Cafe, corner"), (std::vector<double>{0.5, -1.0}));
  std::filesystem::remove(path);
}

// --- InfoNCE ----------------------------------------------------------------

// Direct evaluation of the bidirectional objective.
double infonce_oracle(const num::Tensor& zl, const num::Tensor& zt, double tau) {
  const std::size_t n = zl.rows();
  auto unit = [](std::span<const double> r) {
    double s = 0.0;
    for (double x : r) s += x * x;
    std::vector<double> out(r.begin(), r.end());
    for (double& x : out) x /= std::sqrt(s);
    return out;
  };
  std::vector<std::vector<double>> a, b;
  for (std::size_t i = 0; i < n; ++i) {
    a.push_back(unit(zl.row_span(i)));
    b.push_back(unit(zt.row_span(i)));
  }
  auto dot = [](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
    return s;
  };
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double den_l = 0.0, den_t = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      den_l += std::exp(dot(a[i], b[j]) / tau);
      den_t += std::exp(dot(b[i], a[j]) / tau);
    }
    const double pos = std::exp(dot(a[i], b[i]) / tau);
    total += std::log(pos / den_l) + std::log(pos / den_t);
  }
  return -total / (2.0 * static_cast<double>(n));
}

num::Tensor random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  num::Rng rng(seed);
  num::Tensor t = num::Tensor::matrix(r, c);
  for (auto& x : t.values()) x = rng.normal();
  return t;
}

double tape_infonce(const num::Tensor& a, const num::Tensor& b, double tau) {
  num::Tape tape;
  return infonce_loss(tape.constant(a), tape.constant(b), tau).value().item();
}

TEST(InfoNce, SinglePairIsZero) {
  const auto a = random_matrix(1, 8, 1);
  const auto b = random_matrix(1, 8, 2);
  EXPECT_EQ(tape_infonce(a, b, 0.07), 0.0);
  EXPECT_EQ(infonce_loss(a, b, 0.07), 0.0);
}

TEST(InfoNce, IdenticalRowsGiveLogN) {
  for (std::size_t n : {2u, 4u, 16u}) {
    num::Tensor a = num::Tensor::matrix(n, 5, 0.3);
    num::Tensor b = num::Tensor::matrix(n, 5, -1.2);
    EXPECT_NEAR(tape_infonce(a, b, 0.07), std::log(double(n)), 1e-9);
    EXPECT_NEAR(infonce_loss(a, b, 0.07), std::log(double(n)), 1e-9);
  }
}

TEST(InfoNce, Symmetric) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto a = random_matrix(6, 8, 10 + s);
    const auto b = random_matrix(6, 8, 20 + s);
    EXPECT_NEAR(tape_infonce(a, b, 0.07), tape_infonce(b, a, 0.07), 1e-12);
  }
}

TEST(InfoNce, OrthonormalPairsNearZero) {
  const num::Tensor eye = num::Tensor::identity(4);
  EXPECT_LT(infonce_oracle(eye, eye, 0.01), 1e-3);
  EXPECT_LT(tape_infonce(eye, eye, 0.01), 1e-3);
}

TEST(InfoNce, MatchesOracleAndPlainForm) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto a = random_matrix(7, 8, 30 + s);
    const auto b = random_matrix(7, 8, 40 + s);
    const double expected = infonce_oracle(a, b, 0.2);
    EXPECT_NEAR(tape_infonce(a, b, 0.2), expected, 1e-12);
    EXPECT_NEAR(infonce_loss(a, b, 0.2), expected, 1e-12);
    EXPECT_GE(expected, 0.0);
  }
}

TEST(InfoNce, RejectsBadInput) {
  const auto a = random_matrix(3, 4, 1);
  EXPECT_THROW(infonce_loss(a, random_matrix(2, 4, 1), 0.07),
               std::invalid_argument);
  EXPECT_THROW(infonce_loss(a, a, 0.0), std::invalid_argument);
  EXPECT_THROW(infonce_loss(num::Tensor::matrix(0, 4), num::Tensor::matrix(0, 4),
                            0.07),
               std::invalid_argument);
}

TEST(InfoNce, GradientMatchesFiniteDifferences) {
  num::ParameterStore store;
  store.add("zl", random_matrix(4, 8, 50));
  store.add("zt", random_matrix(4, 8, 51));
  const auto result = testing::check_gradients(
      store, [](num::Tape& tape, const num::ParameterStore& s) {
        return infonce_loss(tape.param(s, "zl"), tape.param(s, "zt"), 0.07);
      });
  EXPECT_EQ(result.checked, 64u);
  EXPECT_LT(result.max_relative_error, 1e-4) << result.worst_parameter;
}

// --- model and pretraining --------------------------------------------------

ModelShape small_shape() {
  ModelShape s;
  s.grid = {0.05, 5.0, 8};
  s.hidden = 32;
  s.embedding_dim = 16;
  s.text_dim = 64;
  return s;
}

TEST(Model, DefaultEmbeddingIs128AndUnseenCoordinatesWork) {
  num::Rng rng(1);
  Model model(ModelShape{}, rng);
  const auto z = model.encode_location({123.456, -78.9});
  ASSERT_EQ(z.size(), 128u);
  for (double x : z) EXPECT_TRUE(std::isfinite(x));
  EXPECT_EQ(model.encode_location({123.456, -78.9}), z);
  HashedNgramEmbedder text;
  const auto feats = text.embed_batch(std::vector<std::string>{"Coffee Shop"});
  EXPECT_EQ(model.embed_text(feats).cols(), 128u);
}

TEST(Model, EncoderIsContinuous) {
  num::Rng rng(2);
  Model model(small_shape(), rng);
  const geo::GeoPoint p{0.37, -1.21};
  const auto base = model.encode_location(p);
  double prev_ratio = -1.0;
  for (double delta : {1e-3, 1e-4, 1e-5, 1e-6}) {
    const auto moved = model.encode_location({p.x + delta, p.y - delta});
    double change = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
      change = std::max(change, std::abs(moved[i] - base[i]));
    }
    const double ratio = change / delta;
    // The change shrinks linearly with delta: the ratio stays bounded and
    // settles as delta goes to zero.
    EXPECT_LT(ratio, 1e3);
    if (prev_ratio > 0.0) EXPECT_NEAR(ratio, prev_ratio, 0.05 * prev_ratio + 1e-9);
    prev_ratio = ratio;
  }
}

TEST(Model, CheckpointReloadReproducesOutputs) {
  num::Rng rng(3);
  Model model(small_shape(), rng);
  const std::vector<geo::GeoPoint> pts = {{0, 0}, {1.5, -2}, {100, 3}};
  const auto before = model.encode_locations(pts);
  const auto path = std::filesystem::temp_directory_path() / "locemb_cal.ck";
  model.save(path, {{"note", "x"}});
  num::Metadata meta;
  const Model back = Model::load(path, &meta);
  EXPECT_EQ(meta.at("note"), "x");
  EXPECT_EQ(back.shape(), model.shape());
  EXPECT_EQ(back.encode_locations(pts), before);
  std::filesystem::remove(path);
}

TEST(Model, RejectsForeignCheckpoint) {
  num::ParameterStore store;
  store.add("x", num::Tensor::scalar(1.0));
  const auto path = std::filesystem::temp_directory_path() / "locemb_other.ck";
  num::save_checkpoint(path, store, {{"kind", "lookup"}});
  EXPECT_THROW(Model::load(path), std::runtime_error);
  std::filesystem::remove(path);
}

std::vector<mob::PoiRecord> corners() {
  return {{"a", {0, 0}, "Quiet Harbor cafe"},
          {"b", {10, 0}, "Grand Pine museum"},
          {"c", {0, 10}, "Little Oak gym"},
          {"d", {10, 10}, "Royal Meadow school"}};
}

TEST(Pretrain, FourCornersBeatUninformativeLevel) {
  PretrainConfig cfg;
  cfg.batch_size = 4;
  cfg.epochs = 200;
  cfg.seed = 7;
  cfg.shape = small_shape();
  cfg.shape.grid = {0.5, 50.0, 8};
  HashedNgramEmbedder text(64);
  const auto result = pretrain(corners(), text, cfg);
  ASSERT_EQ(result.epoch_losses.size(), 200u);
  EXPECT_LT(result.epoch_losses.back(), std::log(4.0));
  EXPECT_LT(result.epoch_losses.back(), result.epoch_losses.front());
}

TEST(Pretrain, IsDeterministicAndLeavesTextTableUntouched) {
  PrecomputedTextEmbedder::Table table;
  num::Rng rng(4);
  for (const auto& p : corners()) {
    std::vector<double> v(64);
    for (auto& x : v) x = rng.normal();
    table[p.description] = v;
  }
  const PrecomputedTextEmbedder text(table);
  PretrainConfig cfg;
  cfg.batch_size = 3;
  cfg.epochs = 5;
  cfg.shape = small_shape();
  const auto a = pretrain(corners(), text, cfg);
  const auto b = pretrain(corners(), text, cfg);
  EXPECT_EQ(text.table(), table);
  EXPECT_TRUE(a.model.params().same_values(b.model.params()));
  EXPECT_EQ(a.epoch_losses, b.epoch_losses);
}

TEST(Pretrain, RejectsDegenerateInput) {
  HashedNgramEmbedder text(64);
  PretrainConfig cfg;
  cfg.shape = small_shape();
  EXPECT_THROW(pretrain(std::vector<mob::PoiRecord>{}, text, cfg),
               std::invalid_argument);
  cfg.batch_size = 1;
  EXPECT_THROW(pretrain(corners(), text, cfg), std::invalid_argument);
  cfg.batch_size = 4;
  cfg.temperature = 0.0;
  EXPECT_THROW(pretrain(corners(), text, cfg), std::invalid_argument);
  cfg.temperature = 0.07;
  cfg.shape.text_dim = 32;
  EXPECT_THROW(pretrain(corners(), text, cfg), std::invalid_argument);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

TEST(Pretrain, SameCategoryLocationsEmbedCloser) {
  mob::SynthConfig city_cfg;
  city_cfg.n_users = 1;
  city_cfg.days = 1;
  city_cfg.seed = 12;
  const auto city = mob::generate_synthetic_city(city_cfg);
  PretrainConfig cfg;
  cfg.batch_size = 64;
  cfg.epochs = 30;
  cfg.seed = 1;
  cfg.shape.grid = {20.0, 20000.0, 16};
  cfg.shape.hidden = 64;
  cfg.shape.embedding_dim = 32;
  HashedNgramEmbedder text(cfg.shape.text_dim);
  const auto result = pretrain(city.pois, text, cfg);
  EXPECT_LT(result.epoch_losses.back(), result.epoch_losses.front());

  std::vector<geo::GeoPoint> pts;
  std::vector<std::size_t> cats;
  for (const auto& loc : city.index.locations()) {
    pts.push_back(loc.centroid);
    cats.push_back(city.category_of.at(loc.id));
  }
  const auto z = result.model.encode_locations(pts);
  double same = 0.0, diff = 0.0;
  std::size_t n_same = 0, n_diff = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double c = cosine(z.row_span(i), z.row_span(j));
      if (cats[i] == cats[j]) {
        same += c;
        ++n_same;
      } else {
        diff += c;
        ++n_diff;
      }
    }
  }
  EXPECT_GT(same / double(n_same), diff / double(n_diff));
}

}  // namespace
}  // namespace locemb::calliper
