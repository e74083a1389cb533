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

#include "locemb/num/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace locemb::num {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint IO assumes a little-endian host");

constexpr char kMagic[8] = {'L', 'O', 'C', 'E', 'M', 'B', 'C', 'K'};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

class Reader {
 public:
  Reader(std::istream& in, const std::filesystem::path& path)
      : in_(in), path_(path) {}

  template <typename T>
  T get() {
    T v{};
    in_.read(reinterpret_cast<char*>(&v), sizeof(T));
    check();
    return v;
  }

  std::string get_string() {
    const auto n = get<std::uint32_t>();
    std::string s(n, '\0');
    in_.read(s.data(), n);
    check();
    return s;
  }

  void read_doubles(double* dst, std::size_t n) {
    in_.read(reinterpret_cast<char*>(dst),
             static_cast<std::streamsize>(n * sizeof(double)));
    check();
  }

 private:
  void check() {
    if (!in_) {
      throw std::runtime_error("load_checkpoint: truncated file " +
                               path_.string());
    }
  }

  std::istream& in_;
  const std::filesystem::path& path_;
};

}  // namespace

void save_checkpoint(const std::filesystem::path& path,
                     const ParameterStore& params, const Metadata& metadata) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("save_checkpoint: cannot open " + path.string());
  }
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(metadata.size()));
  for (const auto& [k, v] : metadata) {
    put_string(out, k);
    put_string(out, v);
  }
  const auto names = params.names();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(names.size()));
  for (const auto& name : names) {
    const Tensor& t = params.value(name);
    put_string(out, name);
    put<std::uint8_t>(out, params.trainable(name) ? 1 : 0);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.rank()));
    for (std::size_t d : t.shape()) put<std::uint64_t>(out, d);
    out.write(reinterpret_cast<const char*>(t.data()),
              static_cast<std::streamsize>(t.size() * sizeof(double)));
  }
  if (!out) {
    throw std::runtime_error("save_checkpoint: write failed for " +
                             path.string());
  }
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("load_checkpoint: cannot open " + path.string());
  }
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("load_checkpoint: " + path.string() +
                             " is not a checkpoint file");
  }
  Reader r(in, path);
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw std::runtime_error("load_checkpoint: unsupported version " +
                             std::to_string(version));
  }
  Checkpoint ck;
  const auto n_meta = r.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < n_meta; ++i) {
    std::string key = r.get_string();
    ck.metadata[key] = r.get_string();
  }
  const auto n_params = r.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < n_params; ++i) {
    std::string name = r.get_string();
    const bool trainable = r.get<std::uint8_t>() != 0;
    const auto rank = r.get<std::uint32_t>();
    Shape shape(rank);
    for (auto& d : shape) d = static_cast<std::size_t>(r.get<std::uint64_t>());
    Tensor t(shape, 0.0);
    r.read_doubles(t.data(), t.size());
    ck.params.add(name, std::move(t), trainable);
  }
  return ck;
}

}  // namespace locemb::num
