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

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ttqst/tensor_train.hpp"

namespace ttqst {

/// Tensor product of single-qubit Paulis, gamma_i in {0,1,2,3} = {I,X,Y,Z}.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(MultiIndex gammas);
  /// Also checks that the string has exactly `qubits` entries.
  PauliString(std::size_t qubits, MultiIndex gammas);

  static PauliString identity(std::size_t qubits);
  /// Accepts letters "IXYZ" or digits "0123".
  static PauliString parse(std::string_view text);

  std::size_t size() const noexcept { return gammas_.size(); }
  std::uint8_t operator[](std::size_t i) const { return gammas_[i]; }
  const MultiIndex& gammas() const noexcept { return gammas_; }
  std::span<const std::uint8_t> span() const noexcept { return gammas_; }
  operator std::span<const std::uint8_t>() const noexcept { return gammas_; }

  /// Number of non-identity factors.
  std::size_t weight() const noexcept;
  bool is_identity() const noexcept { return weight() == 0; }
  std::string to_string() const;

  friend auto operator<=>(const PauliString&, const PauliString&) = default;

 private:
  MultiIndex gammas_;
};

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const noexcept;
};

/// 2x2 matrix sigma^gamma.
Eigen::Matrix2cd pauli_matrix(int gamma);

/// Per-site computational-to-Pauli map on (M^00, M^01, M^10, M^11):
///   G0 = (M00+M11)/2, G1 = (M01+M10)/2, G2 = i(M01-M10)/2, G3 = (M00-M11)/2.
inline std::array<Complex, 4> computational_to_pauli(Complex m00, Complex m01, Complex m10,
                                                     Complex m11) {
  const Complex i{0.0, 1.0};
  return {(m00 + m11) * 0.5, (m01 + m10) * 0.5, i * (m01 - m10) * 0.5, (m00 - m11) * 0.5};
}

/// Inverse of computational_to_pauli: returns (M00, M01, M10, M11).
inline std::array<Complex, 4> pauli_to_computational(Complex g0, Complex g1, Complex g2,
                                                     Complex g3) {
  const Complex i{0.0, 1.0};
  return {g0 + g3, g1 - i * g2, g1 + i * g2, g0 - g3};
}

/// Site-wise computational_to_pauli on an MPO with physical index 2s+s'.
/// Bond dimensions are unchanged.
ComplexTensorTrain mpo_to_pauli(const ComplexTensorTrain& mpo);
/// Site-wise pauli_to_computational; inverse of mpo_to_pauli.
ComplexTensorTrain pauli_to_mpo(const ComplexTensorTrain& pauli_tt);

/// Tr(rho^2) = 2^N sum_g A(g)^2 for a Pauli-coefficient train. Values outside
/// [2^-N, 1 + 1e-9] are clamped with a warning.
double purity(const RealTensorTrain& pauli_tt);

}  // namespace ttqst
