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

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace locemb::num {

// Seeded generator with a fully specified output stream.
//
// The engine is std::mt19937_64, whose sequence is fixed by the C++
// standard. The distributions are implemented here rather than taken from
// <random>, because the standard distributions are implementation-defined:
//   uniform()   = (next_u64() >> 11) * 2^-53
//   below(n)    = rejection sampling on next_u64() against the largest
//                 multiple of n
//   normal()    = Box-Muller, cos branch only, u1 taken from (0,1]
//   shuffle()   = Fisher-Yates from the back using below(i + 1)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t n);
  double normal();
  double normal(double mean, double stddev) {
    return mean + stddev * normal();
  }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finaliser over (a, b); used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace locemb::num
