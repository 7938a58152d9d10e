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

#include "ttqst/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "ttqst/error.hpp"

namespace ttqst {

double distance_D(const RealTensorTrain& rho1, const RealTensorTrain& rho2) {
  if (rho1.dims() != rho2.dims()) throw DimensionError("distance_D needs matching dimensions");
  const double t11 = trace_product(rho1, rho1);
  const double t22 = trace_product(rho2, rho2);
  const double t12 = trace_product(rho1, rho2);
  const double t21 = trace_product(rho2, rho1);
  if (!(t11 > 0)) throw NumericalError("distance_D is undefined for a zero reference state");
  const double d = (t11 + t22 - t12 - t21) / t11;
  if (d < -1e-12) throw NumericalError(fmt::format("distance_D came out negative ({})", d));
  return std::max(d, 0.0);
}

double distance_Ds(std::span<const PauliString> strings, std::span<const double> expectations,
                   const RealTensorTrain& recon) {
  if (strings.size() != expectations.size()) {
    throw DimensionError("distance_Ds needs one value per string");
  }
  if (strings.empty()) throw Error("distance_Ds needs at least one sample");
  const int n = static_cast<int>(recon.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < strings.size(); ++i) {
    const double r = std::ldexp(element(recon, strings[i].span()), n);
    num += (expectations[i] - r) * (expectations[i] - r);
    den += expectations[i] * expectations[i];
  }
  if (!(den > 0)) throw NumericalError("distance_Ds has a zero denominator");
  return num / den;
}

double distance_Ds(const ElementOracle& oracle, const RealTensorTrain& recon) {
  const auto& log = oracle.query_log();
  if (log.empty()) throw Error("distance_Ds needs a nonempty query log");
  double num = 0.0, den = 0.0;
  for (const auto& idx : log) {
    const double v = *oracle.cached(idx);
    const double r = element(recon, std::span<const std::uint8_t>(idx));
    num += (v - r) * (v - r);
    den += v * v;
  }
  if (!(den > 0)) throw NumericalError("distance_Ds has a zero denominator");
  return num / den;
}

namespace {

void check_hermitian(const Eigen::MatrixXcd& m, const char* name) {
  const double skew = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (skew > 1e-8) {
    throw NumericalError(fmt::format("{} is not Hermitian (max deviation {:.3g})", name, skew));
  }
}

}  // namespace

FidelityReference::FidelityReference(const DenseOperator& rho1) : qubits_(rho1.qubits()) {
  if (rho1.qubits() > kMaxFidelityQubits) {
    throw SizeLimitError(fmt::format("fidelity is limited to {} qubits", kMaxFidelityQubits));
  }
  check_hermitian(rho1.matrix(), "rho1");
  using Solver = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>;
  const Solver e1(rho1.matrix());
  if (e1.info() != Eigen::Success) throw NumericalError("eigensolver failed on rho1");
  const Eigen::VectorXd root = e1.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  root_ = e1.eigenvectors() * root.asDiagonal() * e1.eigenvectors().adjoint();
}

double FidelityReference::operator()(const DenseOperator& rho2) const {
  if (rho2.qubits() != qubits_) throw DimensionError("fidelity needs equal dimensions");
  check_hermitian(rho2.matrix(), "rho2");
  Eigen::MatrixXcd x = root_ * rho2.matrix() * root_;
  x = (0.5 * (x + x.adjoint())).eval();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ex(x, Eigen::EigenvaluesOnly);
  if (ex.info() != Eigen::Success) throw NumericalError("eigensolver failed on the product");
  double f = 0.0;
  for (double l : ex.eigenvalues()) f += std::copysign(std::sqrt(std::abs(l)), l);
  return f;
}

double fidelity(const DenseOperator& rho1, const DenseOperator& rho2) {
  if (rho1.dim() != rho2.dim()) throw DimensionError("fidelity needs equal dimensions");
  return FidelityReference(rho1)(rho2);
}

double loss_L(std::span<const PauliString> strings, std::span<const double> expectations,
              const RealTensorTrain& recon) {
  if (strings.size() != expectations.size()) {
    throw DimensionError("loss_L needs one value per string");
  }
  const int n = static_cast<int>(recon.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < strings.size(); ++i) {
    const double r = std::ldexp(element(recon, strings[i].span()), n);
    sum += (expectations[i] - r) * (expectations[i] - r);
  }
  return sum;
}

}  // namespace ttqst
