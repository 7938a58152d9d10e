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

#include "ttqst/pauli.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

namespace ttqst {

PauliString::PauliString(MultiIndex gammas) : gammas_(std::move(gammas)) {
  for (std::size_t i = 0; i < gammas_.size(); ++i) {
    if (gammas_[i] > 3) {
      throw DimensionError(fmt::format("Pauli index {} at qubit {} is not in 0..3",
                                       int(gammas_[i]), i));
    }
  }
}

PauliString::PauliString(std::size_t qubits, MultiIndex gammas) : PauliString(std::move(gammas)) {
  if (gammas_.size() != qubits) {
    throw DimensionError(
        fmt::format("Pauli string has {} entries, expected {}", gammas_.size(), qubits));
  }
}

PauliString PauliString::identity(std::size_t qubits) {
  return PauliString(MultiIndex(qubits, 0));
}

PauliString PauliString::parse(std::string_view text) {
  MultiIndex g;
  g.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case 'I': case 'i': case '0': g.push_back(0); break;
      case 'X': case 'x': case '1': g.push_back(1); break;
      case 'Y': case 'y': case '2': g.push_back(2); break;
      case 'Z': case 'z': case '3': g.push_back(3); break;
      default:
        throw DimensionError(fmt::format("invalid Pauli character '{}'", c));
    }
  }
  return PauliString(std::move(g));
}

std::size_t PauliString::weight() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(gammas_.begin(), gammas_.end(), [](std::uint8_t g) { return g != 0; }));
}

std::string PauliString::to_string() const {
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  std::string s;
  s.reserve(gammas_.size());
  for (auto g : gammas_) s.push_back(kLetters[g]);
  return s;
}

std::size_t PauliStringHash::operator()(const PauliString& p) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (auto g : p.gammas()) h = (h ^ g) * 0x100000001b3ULL;
  return h;
}

Eigen::Matrix2cd pauli_matrix(int gamma) {
  const Complex i{0.0, 1.0};
  Eigen::Matrix2cd m;
  switch (gamma) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw DimensionError(fmt::format("invalid Pauli index {}", gamma));
  }
  return m;
}

ComplexTensorTrain pauli_to_mpo(const ComplexTensorTrain& pauli_tt) {
  std::vector<Core<Complex>> cores;
  cores.reserve(pauli_tt.size());
  for (std::size_t p = 0; p < pauli_tt.size(); ++p) {
    const auto& c = pauli_tt.core(p);
    if (c.phys_dim() != 4) {
      throw DimensionError(fmt::format("site {} has physical dimension {}, expected 4", p,
                                       c.phys_dim()));
    }
    Core<Complex> m(c.left_dim(), 4, c.right_dim());
    for (Index a = 0; a < c.left_dim(); ++a) {
      for (Index b = 0; b < c.right_dim(); ++b) {
        const auto q = pauli_to_computational(c(a, 0, b), c(a, 1, b), c(a, 2, b), c(a, 3, b));
        for (Index k = 0; k < 4; ++k) m(a, k, b) = q[static_cast<std::size_t>(k)];
      }
    }
    cores.push_back(std::move(m));
  }
  return ComplexTensorTrain(std::move(cores));
}

ComplexTensorTrain mpo_to_pauli(const ComplexTensorTrain& mpo) {
  std::vector<Core<Complex>> cores;
  cores.reserve(mpo.size());
  for (std::size_t p = 0; p < mpo.size(); ++p) {
    const auto& c = mpo.core(p);
    if (c.phys_dim() != 4) {
      throw DimensionError(fmt::format("site {} has physical dimension {}, expected 4", p,
                                       c.phys_dim()));
    }
    Core<Complex> g(c.left_dim(), 4, c.right_dim());
    for (Index a = 0; a < c.left_dim(); ++a) {
      for (Index b = 0; b < c.right_dim(); ++b) {
        const auto q = computational_to_pauli(c(a, 0, b), c(a, 1, b), c(a, 2, b), c(a, 3, b));
        for (Index k = 0; k < 4; ++k) g(a, k, b) = q[static_cast<std::size_t>(k)];
      }
    }
    cores.push_back(std::move(g));
  }
  return ComplexTensorTrain(std::move(cores));
}

double purity(const RealTensorTrain& pauli_tt) {
  const double n = static_cast<double>(pauli_tt.size());
  const double raw = std::exp2(n) * trace_product(pauli_tt, pauli_tt);
  const double lo = std::exp2(-n);
  const double hi = 1.0 + 1e-9;
  if (raw < lo * (1.0 - 1e-9) || raw > hi) {
    spdlog::warn("purity {:.12g} outside [{:.3g}, 1]; clamping", raw, lo);
  }
  return std::clamp(raw, lo, hi);
}

}  // namespace ttqst
