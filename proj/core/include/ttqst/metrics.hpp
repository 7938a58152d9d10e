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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ttqst/dense.hpp"
#include "ttqst/oracle.hpp"
#include "ttqst/pauli.hpp"
#include "ttqst/tensor_train.hpp"

namespace ttqst {

struct DistanceReport {
  double D = 0.0;
  std::optional<double> Ds;
  std::optional<double> fidelity;
  std::size_t Nb = 0;
};

/// Fidelity is only evaluated densely up to this many qubits.
inline constexpr int kMaxFidelityQubits = 10;

/// ||rho1 - rho2||_F^2 / ||rho1||_F^2 from the three trace products
/// (T11 + T22 - T12 - T21) / T11. Throws NumericalError when T11 is zero.
double distance_D(const RealTensorTrain& rho1, const RealTensorTrain& rho2);

/// Same quantity restricted to a list of strings, with rho1 given by the
/// recorded <sigma> values.
double distance_Ds(std::span<const PauliString> strings, std::span<const double> expectations,
                   const RealTensorTrain& recon);

/// distance_Ds over every index in the oracle's query log, using the values
/// the oracle returned.
double distance_Ds(const ElementOracle& oracle, const RealTensorTrain& recon);

/// Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)). rho1 must be PSD (small negative
/// eigenvalues are clamped); rho2 only Hermitian. Negative eigenvalues of the
/// inner product contribute -sqrt(|lambda|), so a non-PSD rho2 may give F > 1.
double fidelity(const DenseOperator& rho1, const DenseOperator& rho2);

/// fidelity() against a fixed rho1, with sqrt(rho1) computed once.
class FidelityReference {
 public:
  explicit FidelityReference(const DenseOperator& rho1);
  double operator()(const DenseOperator& rho2) const;
  int qubits() const noexcept { return qubits_; }

 private:
  int qubits_ = 0;
  Eigen::MatrixXcd root_;
};

/// Sum of squared differences between recorded and reconstructed <sigma>.
double loss_L(std::span<const PauliString> strings, std::span<const double> expectations,
              const RealTensorTrain& recon);

}  // namespace ttqst
