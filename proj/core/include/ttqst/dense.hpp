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

#include <span>
#include <vector>

#include <Eigen/Core>

#include "ttqst/tensor_train.hpp"

namespace ttqst {

/// Dense operators are only built for at most this many qubits.
inline constexpr int kMaxDenseQubits = 12;

/// 2^N x 2^N complex matrix. Qubit 1 is the most significant bit of the
/// computational basis index (kron order sigma_1 (x) sigma_2 (x) ...).
class DenseOperator {
 public:
  explicit DenseOperator(Eigen::MatrixXcd m);

  int qubits() const noexcept { return qubits_; }
  Index dim() const noexcept { return m_.rows(); }
  const Eigen::MatrixXcd& matrix() const noexcept { return m_; }

 private:
  Eigen::MatrixXcd m_;
  int qubits_ = 0;
};

/// rho = sum_g A(g) sigma^{g_1} (x) ... (x) sigma^{g_N} from a Pauli-coefficient train.
DenseOperator to_dense_operator(const RealTensorTrain& pauli_tt);
DenseOperator to_dense_operator(const ComplexTensorTrain& pauli_tt);

/// Computational-basis MPO (physical index 2s+s') to a dense matrix.
DenseOperator mpo_to_dense_operator(const ComplexTensorTrain& mpo);

/// A(g) = Tr(rho sigma^g) / 2^N for all 4^N strings, row-major in g.
std::vector<Complex> pauli_coefficients(const DenseOperator& rho);

DenseOperator from_pauli_coefficients(std::span<const Complex> coefficients, int qubits);

}  // namespace ttqst
