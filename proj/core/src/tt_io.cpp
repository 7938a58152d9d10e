// Copyright 2026 The ttqst Authors
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

#include "ttqst/tt_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

namespace ttqst {

namespace {

constexpr std::array<char, 4> kMagic = {'T', 'T', 'Q', 'S'};
constexpr std::uint32_t kMaxDim = 1U << 20;

template <typename U>
U to_little(U v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<std::uint8_t, sizeof(U)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<U>(bytes);
  }
  return v;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ostream& out, double v) {
  auto bits = to_little(std::bit_cast<std::uint64_t>(v));
  out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
}

std::uint32_t get_u32(std::istream& in) {
  std::uint32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error("truncated tensor-train file");
  return to_little(v);
}

double get_f64(std::istream& in) {
  std::uint64_t bits = 0;
  if (!in.read(reinterpret_cast<char*>(&bits), sizeof bits)) {
    throw Error("truncated tensor-train file");
  }
  return std::bit_cast<double>(to_little(bits));
}

template <typename T>
void write_impl(std::ostream& out, const TensorTrain<T>& tt, std::uint8_t kind) {
  out.put(static_cast<char>(kTensorTrainFormatVersion));
  out.write(kMagic.data(), kMagic.size());
  out.put(static_cast<char>(kind));
  put_u32(out, static_cast<std::uint32_t>(tt.size()));
  for (const auto& c : tt.cores()) {
    put_u32(out, static_cast<std::uint32_t>(c.left_dim()));
    put_u32(out, static_cast<std::uint32_t>(c.phys_dim()));
    put_u32(out, static_cast<std::uint32_t>(c.right_dim()));
  }
  for (const auto& c : tt.cores()) {
    for (const T& v : c.data()) {
      if constexpr (std::is_same_v<T, double>) {
        put_f64(out, v);
      } else {
        put_f64(out, v.real());
        put_f64(out, v.imag());
      }
    }
  }
  if (!out) throw Error("failed writing tensor-train container");
}

template <typename T>
TensorTrain<T> read_cores(std::istream& in, const std::vector<std::array<std::uint32_t, 3>>& shapes) {
  std::vector<Core<T>> cores;
  cores.reserve(shapes.size());
  for (const auto& s : shapes) {
    std::vector<T> data(std::size_t{s[0]} * s[1] * s[2]);
    for (auto& v : data) {
      if constexpr (std::is_same_v<T, double>) {
        v = get_f64(in);
      } else {
        const double re = get_f64(in);
        const double im = get_f64(in);
        v = T(re, im);
      }
    }
    cores.emplace_back(s[0], s[1], s[2], std::move(data));
  }
  return TensorTrain<T>(std::move(cores));
}

}  // namespace

void write_tensor_train(std::ostream& out, const RealTensorTrain& tt) { write_impl(out, tt, 0); }

void write_tensor_train(std::ostream& out, const ComplexTensorTrain& tt) {
  write_impl(out, tt, 1);
}

AnyTensorTrain read_tensor_train(std::istream& in) {
  const int version = in.get();
  if (version != kTensorTrainFormatVersion) {
    throw Error(fmt::format("unsupported tensor-train container version {}", version));
  }
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw Error("not a tensor-train container (bad magic)");
  const int kind = in.get();
  if (kind != 0 && kind != 1) throw Error(fmt::format("unknown scalar kind {}", kind));
  const std::uint32_t n = get_u32(in);
  if (n == 0 || n > 4096) throw Error(fmt::format("implausible site count {}", n));
  std::vector<std::array<std::uint32_t, 3>> shapes(n);
  for (auto& s : shapes) {
    for (auto& v : s) {
      v = get_u32(in);
      if (v == 0 || v > kMaxDim) throw Error("implausible core dimension in container");
    }
  }
  if (kind == 0) return read_cores<double>(in, shapes);
  return read_cores<Complex>(in, shapes);
}

void save_tensor_train(const std::filesystem::path& path, const RealTensorTrain& tt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot open {} for writing", path.string()));
  write_tensor_train(out, tt);
}

RealTensorTrain load_real_tensor_train(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open {}", path.string()));
  auto any = read_tensor_train(in);
  if (auto* real = std::get_if<RealTensorTrain>(&any)) return std::move(*real);
  return cast_real(std::get<ComplexTensorTrain>(any));
}

}  // namespace ttqst
