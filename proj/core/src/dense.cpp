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

#include "ttqst/dense.hpp"

#include <bit>
#include <cmath>

#include <fmt/format.h>

#include "ttqst/pauli.hpp"

namespace ttqst {

namespace {

int qubits_of_dim(Index dim) {
  if (dim < 2 || !std::has_single_bit(static_cast<std::uint64_t>(dim))) {
    throw DimensionError(fmt::format("operator dimension {} is not a power of two", dim));
  }
  return std::countr_zero(static_cast<std::uint64_t>(dim));
}

void check_qubits(int n) {
  if (n > kMaxDenseQubits) {
    throw SizeLimitError(
        fmt::format("dense operators are capped at {} qubits (got {})", kMaxDenseQubits, n));
  }
}

// Inserts a zero bit above every bit of x: b_k -> position 2k.
std::size_t spread_bits(std::size_t x) {
  std::size_t out = 0;
  for (int k = 0; x != 0; ++k, x >>= 1) out |= (x & 1U) << (2 * k);
  return out;
}

// Position of rho(row, col) in the site-grouped vector with digits 2 s_i + s'_i.
std::vector<std::size_t> spread_table(int n) {
  std::vector<std::size_t> t(std::size_t{1} << n);
  for (std::size_t x = 0; x < t.size(); ++x) t[x] = spread_bits(x);
  return t;
}

}  // namespace

DenseOperator::DenseOperator(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw DimensionError("dense operator must be square");
  qubits_ = qubits_of_dim(m_.rows());
  check_qubits(qubits_);
}

DenseOperator mpo_to_dense_operator(const ComplexTensorTrain& mpo) {
  const int n = static_cast<int>(mpo.size());
  check_qubits(n);
  for (Index d : mpo.dims()) {
    if (d != 4) throw DimensionError("computational MPO sites must have physical dimension 4");
  }
  const auto flat = materialize(mpo);
  const auto table = spread_table(n);
  const Index dim = Index{1} << n;
  Eigen::MatrixXcd m(dim, dim);
  for (Index row = 0; row < dim; ++row) {
    const std::size_t hi = 2 * table[static_cast<std::size_t>(row)];
    for (Index col = 0; col < dim; ++col) {
      m(row, col) = flat[hi + table[static_cast<std::size_t>(col)]];
    }
  }
  return DenseOperator(std::move(m));
}

DenseOperator to_dense_operator(const ComplexTensorTrain& pauli_tt) {
  check_qubits(static_cast<int>(pauli_tt.size()));
  return mpo_to_dense_operator(pauli_to_mpo(pauli_tt));
}

DenseOperator to_dense_operator(const RealTensorTrain& pauli_tt) {
  return to_dense_operator(to_complex(pauli_tt));
}

std::vector<Complex> pauli_coefficients(const DenseOperator& rho) {
  const int n = rho.qubits();
  const auto table = spread_table(n);
  const Index dim = rho.dim();
  std::vector<Complex> v(std::size_t{1} << (2 * n));
  for (Index row = 0; row < dim; ++row) {
    const std::size_t hi = 2 * table[static_cast<std::size_t>(row)];
    for (Index col = 0; col < dim; ++col) {
      v[hi + table[static_cast<std::size_t>(col)]] = rho.matrix()(row, col);
    }
  }
  for (int site = 0; site < n; ++site) {
    const std::size_t stride = std::size_t{1} << (2 * (n - 1 - site));
    for (std::size_t base = 0; base < v.size(); base += 4 * stride) {
      for (std::size_t off = 0; off < stride; ++off) {
        const std::size_t k = base + off;
        const auto g = computational_to_pauli(v[k], v[k + stride], v[k + 2 * stride],
                                              v[k + 3 * stride]);
        for (std::size_t j = 0; j < 4; ++j) v[k + j * stride] = g[j];
      }
    }
  }
  return v;
}

DenseOperator from_pauli_coefficients(std::span<const Complex> coefficients, int qubits) {
  check_qubits(qubits);
  const std::size_t total = std::size_t{1} << (2 * qubits);
  if (coefficients.size() != total) {
    throw DimensionError(fmt::format("{} coefficients given, {} qubits need {}",
                                     coefficients.size(), qubits, total));
  }
  std::vector<Complex> v(coefficients.begin(), coefficients.end());
  for (int site = 0; site < qubits; ++site) {
    const std::size_t stride = std::size_t{1} << (2 * (qubits - 1 - site));
    for (std::size_t base = 0; base < v.size(); base += 4 * stride) {
      for (std::size_t off = 0; off < stride; ++off) {
        const std::size_t k = base + off;
        const auto m = pauli_to_computational(v[k], v[k + stride], v[k + 2 * stride],
                                              v[k + 3 * stride]);
        for (std::size_t j = 0; j < 4; ++j) v[k + j * stride] = m[j];
      }
    }
  }
  const auto table = spread_table(qubits);
  const Index dim = Index{1} << qubits;
  Eigen::MatrixXcd m(dim, dim);
  for (Index row = 0; row < dim; ++row) {
    const std::size_t hi = 2 * table[static_cast<std::size_t>(row)];
    for (Index col = 0; col < dim; ++col) m(row, col) = v[hi + table[static_cast<std::size_t>(col)]];
  }
  return DenseOperator(std::move(m));
}

}  // namespace ttqst
