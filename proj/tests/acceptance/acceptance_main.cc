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


// Acceptance run: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails. Arguments, when given, select criterion numbers.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck.h"
#include "locemb/calliper/infonce.h"
#include "locemb/eval/metrics.h"
#include "locemb/eval/report.h"
#include "locemb/geo/fcnet.h"
#include "locemb/geo/grid.h"
#include "locemb/mob/manifest.h"
#include "locemb/mob/sequences.h"
#include "locemb/mob/splits.h"
#include "locemb/mob/synth.h"
#include "locemb/mob/time.h"
#include "locemb/num/ops.h"
#include "locemb/num/rng.h"
#include "locemb/pipeline/config.h"
#include "locemb/pipeline/experiment.h"
#include "locemb/pred/model.h"
#include "metric_oracle.h"

namespace {

using namespace locemb;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// 1. Grid encoding and radii against hand-evaluated cases.

void criterion_1(Outcome& o) {
  const auto t0 = Clock::now();
  const geo::GridSpec reference{0.01, 10.0, 32};
  const auto radii = geo::scale_radii(reference);
  o.check(radii.size() == 32, "32 radii");
  o.check(radii.front() == 0.01 && radii.back() == 10.0, "exact endpoints");
  // alpha_s = r_min * (r_max / r_min)^(s / (S - 1)) with S = 3, 1 .. 100.
  const auto three = geo::scale_radii({1.0, 100.0, 3});
  o.check(three.size() == 3 && three[0] == 1.0 && std::abs(three[1] - 10.0) < 1e-12 &&
              three[2] == 100.0,
          "radii 1, 10, 100");
  for (std::size_t s = 1; s < radii.size(); ++s) {
    o.check(std::abs(radii[s] / radii[s - 1] - std::pow(1000.0, 1.0 / 31.0)) <
                1e-12,
            "constant ratio");
  }
  const auto origin = geo::grid_pe({0.0, 0.0}, reference);
  o.check(origin.size() == 128, "length 4S");
  for (std::size_t i = 0; i < origin.size(); ++i) {
    o.check(origin[i] == (i % 2 == 0 ? 1.0 : 0.0), "(0,0) gives cos 1, sin 0");
  }
  // S = 2 over radii 1 and 2 at (1, 2).
  const auto pe = geo::grid_pe({1.0, 2.0}, {1.0, 2.0, 2});
  const std::vector<double> want = {std::cos(1.0), std::sin(1.0), std::cos(2.0),
                                    std::sin(2.0), std::cos(0.5), std::sin(0.5),
                                    std::cos(1.0), std::sin(1.0)};
  o.check(pe.size() == want.size(), "length 8");
  for (std::size_t i = 0; i < std::min(pe.size(), want.size()); ++i) {
    o.check(std::abs(pe[i] - want[i]) < 1e-15, "hand-evaluated (1, 2)");
  }
  // A quarter wavelength at the first scale.
  const double q = std::numbers::pi / 2.0 * 0.01;
  const auto quarter = geo::grid_pe({q, 0.0}, reference);
  o.check(std::abs(quarter[0]) < 1e-12 && std::abs(quarter[1] - 1.0) < 1e-12,
          "quarter wave");
  const double secs = seconds_since(t0);
  o.check(secs < 1.0, "runtime < 1 s");
  o.detail << "radii " << radii.front() << ".." << radii.back() << ", "
           << secs << " s";
}

// ---------------------------------------------------------------------------
// 2. Metrics against brute-force enumeration.

void criterion_2(Outcome& o) {
  const auto t0 = Clock::now();
  num::Rng rng(2024);
  std::size_t matrices = 0, mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t classes = 1 + rng.below(50);
    const std::size_t samples = 1 + rng.below(100);
    const auto scores =
        testing::random_scores(rng, samples, classes, trial % 2 == 1);
    std::vector<std::size_t> targets(samples);
    for (auto& t : targets) t = rng.below(classes);
    for (auto exec : {num::kernels::Exec::kSerial, num::kernels::Exec::kParallel}) {
      const auto r = eval::ranks(scores, targets, exec);
      const auto got = eval::RunMetrics::from_ranks(r);
      const auto want = testing::oracle_metrics(scores, targets);
      const bool same = got.acc1 == want.acc1 && got.acc5 == want.acc5 &&
                        got.acc10 == want.acc10 && got.mrr == want.mrr &&
                        got.ndcg10 == want.ndcg10;
      mismatches += same ? 0 : 1;
    }
    ++matrices;
  }
  o.check(mismatches == 0, std::to_string(mismatches) + " mismatches");
  const double secs = seconds_since(t0);
  o.check(secs < 10.0, "runtime < 10 s");
  o.detail << matrices << " matrices, exact equality, " << secs << " s";
}

// ---------------------------------------------------------------------------
// 3. Finite-difference gradient checks.

num::Tensor random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  num::Rng rng(seed);
  auto t = num::Tensor::matrix(r, c);
  for (double& x : t.values()) x = rng.normal();
  return t;
}

void criterion_3(Outcome& o) {
  const auto t0 = Clock::now();
  const double h = 1e-5;

  num::ParameterStore fc;
  num::Rng rng(3);
  geo::init_fcnet(fc, "loc", {16, 12, 6}, rng);
  const auto x = geo::grid_pe_batch(
      std::vector<geo::GeoPoint>{{0.3, -1.2}, {2.0, 0.1}, {-0.7, 0.9}},
      {0.5, 5.0, 4});
  const auto fc_result = testing::check_gradients(
      fc,
      [&](num::Tape& tape, const num::ParameterStore& s) {
        num::Var out = geo::fcnet_forward(tape, s, "loc", tape.constant(x));
        return num::sum(num::mul(out, out));
      },
      h);

  num::ParameterStore z;
  z.add("zl", random_matrix(4, 8, 31));
  z.add("zt", random_matrix(4, 8, 32));
  const auto nce_result = testing::check_gradients(
      z,
      [](num::Tape& tape, const num::ParameterStore& s) {
        return calliper::infonce_loss(tape.param(s, "zl"), tape.param(s, "zt"),
                                      0.07);
      },
      h);

  std::vector<mob::Location> locs;
  for (int i = 0; i < 6; ++i) {
    locs.push_back({"l" + std::to_string(i), "", {double(i), 0.0}, {}});
  }
  const mob::LocationIndex index(std::move(locs));
  pred::EmbedderHandle handle;
  handle.kind = pred::EmbedderKind::kLookup;
  handle.table = random_matrix(6, 8, 33);
  handle.index_fingerprint = index.fingerprint();
  pred::PredictorConfig cfg;
  cfg.layers = 2;
  cfg.heads = 2;
  cfg.d_model = 16;
  cfg.ff_dim = 16;
  cfg.max_context = 8;
  cfg.time_dim = 4;
  cfg.dow_dim = 3;
  cfg.user_dim = 4;
  cfg.dropout = 0.0;
  pred::Predictor model(cfg, handle, index, {"u0"}, 34);
  mob::MobilitySequence seq;
  seq.user = "u0";
  for (int i = 0; i < 4; ++i) {
    seq.context.push_back({"l" + std::to_string(i), 1704067200 + i * 5000});
  }
  seq.target = {"l4", 1704067200 + 4 * 5000};
  const auto enc = model.encode(seq);
  const auto pred_result = testing::check_gradients(
      model.params(),
      [&](num::Tape& tape, const num::ParameterStore& s) {
        pred::Predictor probe = model;
        probe.params() = s;
        const std::size_t t[] = {enc.target};
        return num::cross_entropy(probe.logits(tape, enc), t);
      },
      h);

  const auto report = [&](const char* name, const testing::GradCheckResult& r) {
    o.check(r.max_relative_error < 1e-4,
            std::string(name) + " at " + r.worst_parameter);
    o.detail << name << " " << r.max_relative_error << " (" << r.checked
             << " entries), ";
  };
  report("fcnet", fc_result);
  report("infonce", nce_result);
  report("predictor", pred_result);
  const double secs = seconds_since(t0);
  o.check(secs < 60.0, "runtime < 60 s");
  o.detail << secs << " s";
}

// ---------------------------------------------------------------------------
// 4. InfoNCE anchors.

void criterion_4(Outcome& o) {
  const auto one_a = random_matrix(1, 8, 41), one_b = random_matrix(1, 8, 42);
  const double n1 = calliper::infonce_loss(one_a, one_b, 0.07);
  o.check(std::abs(n1) < 1e-12, "N = 1 gives 0");
  double worst_same = 0.0;
  for (std::size_t n : {2u, 4u, 16u}) {
    auto row = random_matrix(1, 8, 43 + n);
    auto same = num::Tensor::matrix(n, 8);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < 8; ++j) same.at(i, j) = row.at(0, j);
    }
    const double loss = calliper::infonce_loss(same, same, 0.07);
    worst_same = std::max(worst_same, std::abs(loss - std::log(double(n))));
  }
  o.check(worst_same < 1e-9, "identical rows give ln N");
  double worst_sym = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto a = random_matrix(6, 8, 100 + s), b = random_matrix(6, 8, 200 + s);
    worst_sym = std::max(worst_sym, std::abs(calliper::infonce_loss(a, b, 0.07) -
                                             calliper::infonce_loss(b, a, 0.07)));
  }
  o.check(worst_sym < 1e-12, "symmetry");
  o.detail << "N=1 " << n1 << ", |L - ln N| " << worst_same << ", asymmetry "
           << worst_sym;
}

// ---------------------------------------------------------------------------
// 5. Split protocol on synthetic data.

void criterion_5(Outcome& o) {
  const auto t0 = Clock::now();
  const auto cfg = pipeline::preset("synthetic");
  const auto data = pipeline::prepare_data(cfg);

  // Independent tracking periods straight from the records.
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> period;
  for (const auto& r : data.records) {
    const auto d = mob::utc_day(r.time);
    auto [it, fresh] = period.try_emplace(r.user, d, d);
    if (!fresh) {
      it->second.first = std::min(it->second.first, d);
      it->second.second = std::max(it->second.second, d);
    }
  }
  auto part_of = [&](const mob::MobilitySequence& s) {
    const auto [first, last] = period.at(s.user);
    const double days = static_cast<double>(last - first + 1);
    const double d = static_cast<double>(mob::utc_day(s.target.time) - first);
    return d < 0.6 * days - 1e-9 ? 0 : d < 0.8 * days - 1e-9 ? 1 : 2;
  };

  auto conv_cfg = cfg;
  conv_cfg.split.mode = mob::SplitMode::kConventional;
  const auto conv = pipeline::make_splits(conv_cfg, data).front();
  std::size_t wrong = 0;
  std::set<std::uint64_t> seen;
  const std::vector<const std::vector<mob::MobilitySequence>*> parts = {
      &conv.train, &conv.validation, &conv.test};
  for (int p = 0; p < 3; ++p) {
    for (const auto& s : *parts[p]) {
      wrong += part_of(s) != p;
      seen.insert(s.id);
    }
  }
  o.check(wrong == 0, std::to_string(wrong) + " sequences in the wrong part");
  o.check(seen.size() == data.sequences.size(), "parts cover every sequence");
  o.check(conv.train.size() + conv.validation.size() + conv.test.size() ==
              data.sequences.size(),
          "parts are disjoint");

  const auto inductive = pipeline::make_splits(cfg, data);
  o.check(inductive.size() == 5, "5 inductive splits");
  std::size_t leaks = 0;
  std::set<std::string> manifest_hashes;
  const auto manifests = pipeline::make_manifests(data, inductive);
  const auto dir = std::filesystem::temp_directory_path() / "locemb_acceptance_5";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < inductive.size(); ++i) {
    const auto& s = inductive[i];
    for (const auto* part : {&s.train, &s.validation}) {
      for (const auto& q : *part) {
        bool touches = s.new_locations.contains(q.target.location);
        for (const auto& v : q.context) {
          touches = touches || s.new_locations.contains(v.location);
        }
        leaks += touches;
      }
    }
    o.check(s.test == conv.test, "test identical to conventional");
    o.check(s.new_locations.size() ==
                static_cast<std::size_t>(std::llround(
                    0.1 * static_cast<double>(mob::locations_in(conv.train).size()))),
            "10% of train locations held out");
    const auto path = dir / ("split_" + std::to_string(i) + ".json");
    mob::write_manifest(path, manifests[i]);
    manifest_hashes.insert(mob::read_manifest(path).content_sha256);
  }
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files += e.is_regular_file();
  std::filesystem::remove_all(dir);
  o.check(leaks == 0, std::to_string(leaks) + " train/validation sequences touch L_new");
  o.check(files == 5 && manifest_hashes.size() == 5, "5 distinct manifests");
  const double secs = seconds_since(t0);
  o.check(secs < 5.0, "runtime < 5 s");
  o.detail << data.sequences.size() << " sequences, conventional "
           << conv.train.size() << "/" << conv.validation.size() << "/"
           << conv.test.size() << ", " << files << " manifests, " << secs
           << " s";
}

// ---------------------------------------------------------------------------
// 6-8. Synthetic inductive experiment.

struct SyntheticRun {
  pipeline::ExperimentResult result;
  pipeline::PreparedData data;
  // Per run: embedding tables of the calliper and skipgram kinds and the
  // held-out set.
  std::vector<num::Tensor> calliper_tables, skipgram_tables;
  std::vector<std::set<std::string>> held_out;
  double seconds = 0.0;
};

SyntheticRun run_synthetic() {
  const auto t0 = Clock::now();
  SyntheticRun out;
  const auto cfg = pipeline::preset("synthetic");
  out.data = pipeline::prepare_data(cfg);
  out.calliper_tables.resize(cfg.runs());
  out.skipgram_tables.resize(cfg.runs());
  out.held_out.resize(cfg.runs());
  pipeline::ExperimentHooks hooks;
  hooks.on_embedder = [&](std::size_t run, pred::EmbedderKind kind,
                          const pipeline::EmbedderResult& e,
                          const mob::DatasetSplit& split) {
    out.held_out[run] = split.new_locations;
    if (kind == pred::EmbedderKind::kCalliper) out.calliper_tables[run] = e.handle.table;
    if (kind == pred::EmbedderKind::kSkipgram) out.skipgram_tables[run] = e.handle.table;
  };
  hooks.log = [&](const std::string& msg) {
    if (msg.find("acc@5") != std::string::npos) {
      std::printf("  [%6.1f s] %s\n", seconds_since(t0), msg.c_str());
      std::fflush(stdout);
    }
  };
  out.result = pipeline::run_experiment(cfg, out.data, hooks);
  out.seconds = seconds_since(t0);
  return out;
}

const eval::MetricsReport* find_report(const pipeline::ExperimentResult& r,
                                       const std::string& embedder,
                                       const std::string& targets) {
  for (const auto& rep : r.reports) {
    if (rep.embedder == embedder && rep.targets == targets) return &rep;
  }
  return nullptr;
}

void criterion_6(Outcome& o, const SyntheticRun& s) {
  const auto* cal = find_report(s.result, "calliper", "new");
  const auto* van = find_report(s.result, "vanilla-e2e", "new");
  const auto* sg = find_report(s.result, "skipgram", "new");
  o.check(cal && van && sg, "held-out target reports present");
  if (!(cal && van && sg)) return;
  o.check(cal->seeds == van->seeds && cal->seeds == sg->seeds,
          "same runs for all embedders");
  std::size_t wins = 0;
  o.detail << "Acc@5 on held-out targets (calliper/vanilla-e2e/skipgram):";
  for (std::size_t i = 0; i < cal->runs.size(); ++i) {
    const double c = cal->runs[i].acc5, v = van->runs[i].acc5, k = sg->runs[i].acc5;
    wins += c > v && c > k;
    char buf[96];
    std::snprintf(buf, sizeof(buf), " seed %llu: %.4f/%.4f/%.4f (n=%zu);",
                  static_cast<unsigned long long>(cal->seeds[i]), c, v, k,
                  cal->samples[i]);
    o.detail << buf;
  }
  o.check(cal->runs.size() == 5, "5 runs");
  o.check(wins >= 4, "calliper ahead in " + std::to_string(wins) + " of 5 seeds");
  o.check(s.seconds < 15 * 60.0, "runtime < 15 min");
  o.detail << " wins " << wins << "/5, " << s.seconds << " s";
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return 1.0 - dot / std::sqrt(na * nb);
}

// Mean over held-out locations of the cosine distance to the nearest seen
// location of the same category.
double same_category_gap(const num::Tensor& table, const pipeline::PreparedData& data,
                         const std::set<std::string>& held_out) {
  double total = 0.0;
  std::size_t counted = 0;
  for (const auto& id : held_out) {
    const auto r = data.index.index_of(id);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < data.index.size(); ++j) {
      const auto& other = data.index.at(j).id;
      if (held_out.contains(other) ||
          data.categories.at(other) != data.categories.at(id)) {
        continue;
      }
      best = std::min(best, cosine_distance(table.row_span(r), table.row_span(j)));
    }
    if (std::isfinite(best)) {
      total += best;
      ++counted;
    }
  }
  return counted == 0 ? std::numeric_limits<double>::quiet_NaN()
                      : total / static_cast<double>(counted);
}

void criterion_7(Outcome& o, const SyntheticRun& s) {
  const auto t0 = Clock::now();
  std::size_t ok = 0;
  o.detail << "mean same-category cosine gap (calliper/skipgram):";
  for (std::size_t i = 0; i < s.held_out.size(); ++i) {
    const double c = same_category_gap(s.calliper_tables[i], s.data, s.held_out[i]);
    const double k = same_category_gap(s.skipgram_tables[i], s.data, s.held_out[i]);
    ok += c < k;
    char buf[64];
    std::snprintf(buf, sizeof(buf), " %.4f/%.4f;", c, k);
    o.detail << buf;
  }
  o.check(s.held_out.size() == 5, "5 runs");
  o.check(ok == s.held_out.size(), "calliper closer for every seed");
  const double secs = seconds_since(t0);
  o.check(secs < 60.0, "runtime < 1 min");
  o.detail << " " << secs << " s";
}

void criterion_8(Outcome& o, const SyntheticRun& first) {
  const auto again = run_synthetic();
  o.check(again.result.reports.size() == first.result.reports.size(),
          "same number of reports");
  std::size_t differing = 0;
  for (std::size_t i = 0; i < std::min(again.result.reports.size(),
                                       first.result.reports.size());
       ++i) {
    const auto& a = first.result.reports[i];
    const auto& b = again.result.reports[i];
    differing += !(a.runs == b.runs && a.seeds == b.seeds &&
                   a.manifest_hashes == b.manifest_hashes &&
                   eval::to_json(a) == eval::to_json(b));
  }
  std::size_t rank_diffs = 0;
  for (std::size_t i = 0; i < first.result.runs.size(); ++i) {
    rank_diffs += first.result.runs[i].evaluation.ranks !=
                  again.result.runs[i].evaluation.ranks;
  }
  o.check(differing == 0, std::to_string(differing) + " reports differ");
  o.check(rank_diffs == 0, std::to_string(rank_diffs) + " runs rank differently");
  o.detail << first.result.reports.size() << " reports and "
           << first.result.runs.size() << " runs compared bit-for-bit, rerun "
           << again.seconds << " s";
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  auto wanted = [&](int c) { return selected.empty() || selected.contains(c); };

  bool all_pass = true;
  auto emit = [&](int c, Outcome& o) {
    all_pass = all_pass && o.pass;
    std::printf("criterion %d: %s  %s\n", c, o.pass ? "PASS" : "FAIL",
                o.detail.str().c_str());
    std::fflush(stdout);
  };
  auto guarded = [&](int c, const std::function<void(Outcome&)>& body) {
    Outcome o;
    try {
      body(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    emit(c, o);
  };

  if (wanted(1)) guarded(1, criterion_1);
  if (wanted(2)) guarded(2, criterion_2);
  if (wanted(3)) guarded(3, criterion_3);
  if (wanted(4)) guarded(4, criterion_4);
  if (wanted(5)) guarded(5, criterion_5);
  if (wanted(6) || wanted(7) || wanted(8)) {
    SyntheticRun first;
    bool ran = false;
    guarded(6, [&](Outcome& o) {
      first = run_synthetic();
      ran = true;
      criterion_6(o, first);
    });
    if (wanted(7)) {
      guarded(7, [&](Outcome& o) {
        o.check(ran, "criterion 6 artifacts available");
        if (ran) criterion_7(o, first);
      });
    }
    if (wanted(8)) {
      guarded(8, [&](Outcome& o) {
        o.check(ran, "criterion 6 artifacts available");
        if (ran) criterion_8(o, first);
      });
    }
  }
  return all_pass ? 0 : 1;
}
