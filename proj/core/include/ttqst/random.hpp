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

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>

namespace ttqst {

/// SplitMix64 finaliser. Used as a counter-based generator so that noise
/// attached to an index depends only on (seed, index), never on query order.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Top 53 bits mapped to [0, 1).
constexpr double unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform on [-1, 1) from a 64-bit Mersenne Twister draw.
inline double uniform_symmetric(std::mt19937_64& rng) {
  return 2.0 * unit_interval(rng()) - 1.0;
}

inline std::uint64_t hash_index(std::uint64_t seed,
                                std::span<const std::uint8_t> idx) noexcept {
  std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
  for (std::uint8_t v : idx) h = splitmix64(h ^ (static_cast<std::uint64_t>(v) + 1));
  return splitmix64(h ^ idx.size());
}

/// Standard normal deviate keyed by a 64-bit value (Box-Muller).
inline double keyed_normal(std::uint64_t key) noexcept {
  const double u1 = unit_interval(splitmix64(key)) + 0x1.0p-54;
  const double u2 = unit_interval(splitmix64(key ^ 0xd1b54a32d192ed03ULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace ttqst
