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

#include <cstdint>
#include <optional>
#include <vector>

#include "ttqst/dense.hpp"
#include "ttqst/tensor_train.hpp"

namespace ttqst {

/// Random locally purified MPO. Each site carries K Kraus matrices
/// A^{s,a} of shape kappa x kappa (1 x kappa and kappa x 1 at the ends).
struct LptnSpec {
  int N = 2;
  Index kappa = 1;
  Index K = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Transverse-field Ising chain H = sum Z_i Z_{i+1} + g sum X_i with open
/// boundaries, at temperature T.
struct ThermalSpec {
  int N = 2;
  double g = 1.0;
  double T = 1.0;

  void validate() const;
};

/// Computational-basis MPO with physical index 2s+s' and bonds kappa^2:
///   M^{s,s'} = sum_a A^{s,a} (x) conj(A^{s',a}),
/// every core divided by Tr(rho)^{1/N}. Entries of A have real and imaginary
/// parts drawn by uniform_symmetric from std::mt19937_64(seed), in the order
/// site, s, a, row, column, real then imaginary.
ComplexTensorTrain random_lptn(const LptnSpec& spec);

struct PauliConversion {
  /// Pauli-basis cores, same bonds as the input MPO.
  ComplexTensorTrain cores;
  /// Set when every core is real up to the residue threshold.
  std::optional<RealTensorTrain> real;
  /// Largest |Im| over core entries relative to the largest modulus.
  double imag_residue = 0.0;
};

/// Applies the per-site Pauli map and casts to real cores when the imaginary
/// residue is at most tol.
PauliConversion lptn_to_pauli(const ComplexTensorTrain& mpo, double tol = 1e-10);

/// Real Pauli-coefficient train for a conversion. Falls back to the real
/// embedding (then rounding) when the cores had to stay complex.
RealTensorTrain pauli_state(const PauliConversion& conversion);

/// random_lptn followed by lptn_to_pauli and pauli_state.
RealTensorTrain lptn_state(const LptnSpec& spec);

/// Dense Gibbs state, by exact diagonalization.
DenseOperator thermal_ising_dense(const ThermalSpec& spec);

/// All 4^N coefficients A(g) = Tr(rho sigma^g) / 2^N of the thermal state,
/// row-major in g.
std::vector<double> thermal_ising_coefficients(const ThermalSpec& spec);

/// Thermal state as a Pauli-coefficient train, compressed by TT-SVD with
/// relative cutoff tt_tol.
RealTensorTrain thermal_ising(const ThermalSpec& spec, double tt_tol = 1e-12);

}  // namespace ttqst
