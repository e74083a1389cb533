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

#include "locemb/mob/sequences.h"

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "locemb/mob/checkins.h"

namespace locemb::mob {

std::vector<MobilitySequence> build_sequences(
    std::span<const VisitRecord> records, const SequenceOptions& options) {
  std::vector<VisitRecord> sorted(records.begin(), records.end());
  sort_by_user_time(sorted);
  std::vector<MobilitySequence> out;
  std::uint64_t next_id = 0;
  std::size_t user_begin = 0;
  while (user_begin < sorted.size()) {
    std::size_t user_end = user_begin;
    while (user_end < sorted.size() &&
           sorted[user_end].user == sorted[user_begin].user) {
      ++user_end;
    }
    std::size_t window_begin = user_begin;
    for (std::size_t k = user_begin; k < user_end; ++k) {
      const std::int64_t t = sorted[k].time;
      while (sorted[window_begin].time < t - options.window_seconds) {
        ++window_begin;
      }
      std::size_t window_end = k;
      while (window_end > window_begin && sorted[window_end - 1].time >= t) {
        --window_end;
      }
      if (window_end <= window_begin ||
          window_end - window_begin < options.min_context) {
        continue;
      }
      MobilitySequence seq;
      seq.id = next_id++;
      seq.user = sorted[k].user;
      seq.context.reserve(window_end - window_begin);
      for (std::size_t j = window_begin; j < window_end; ++j) {
        seq.context.push_back({sorted[j].location, sorted[j].time});
      }
      seq.target = {sorted[k].location, t};
      out.push_back(std::move(seq));
    }
    user_begin = user_end;
  }
  return out;
}

std::set<std::string> locations_in(
    std::span<const MobilitySequence> sequences) {
  std::set<std::string> out;
  for (const auto& s : sequences) {
    for (const auto& v : s.context) out.insert(v.location);
    out.insert(s.target.location);
  }
  return out;
}

bool touches_any(const MobilitySequence& seq,
                 const std::set<std::string>& locations) {
  if (locations.contains(seq.target.location)) return true;
  for (const auto& v : seq.context) {
    if (locations.contains(v.location)) return true;
  }
  return false;
}

namespace {

nlohmann::json to_json(const MobilitySequence& s) {
  nlohmann::json ctx = nlohmann::json::array();
  for (const auto& v : s.context) ctx.push_back({v.location, v.time});
  return {{"id", s.id},
          {"user", s.user},
          {"context", std::move(ctx)},
          {"target", {s.target.location, s.target.time}}};
}

MobilitySequence from_json(const nlohmann::json& j) {
  MobilitySequence s;
  s.id = j.at("id").get<std::uint64_t>();
  s.user = j.at("user").get<std::string>();
  for (const auto& v : j.at("context")) {
    s.context.push_back({v.at(0).get<std::string>(), v.at(1).get<std::int64_t>()});
  }
  const auto& t = j.at("target");
  s.target = {t.at(0).get<std::string>(), t.at(1).get<std::int64_t>()};
  return s;
}

}  // namespace

std::string sequences_to_jsonl(std::span<const MobilitySequence> sequences) {
  std::string out;
  for (const auto& s : sequences) {
    out += to_json(s).dump();
    out += '\n';
  }
  return out;
}

void write_sequences(const std::filesystem::path& path,
                     std::span<const MobilitySequence> sequences) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("write_sequences: cannot open " + path.string());
  }
  out << sequences_to_jsonl(sequences);
}

std::vector<MobilitySequence> read_sequences(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("read_sequences: cannot open " + path.string());
  }
  std::vector<MobilitySequence> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return out;
}

}  // namespace locemb::mob
