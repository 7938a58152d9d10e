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

// Brute-force reference implementations shared by the test suites. Nothing
// here calls into the library's contraction or basis-change code.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ttqst/tensor_train.hpp"

namespace ttqst::testing {

template <typename T>
T random_scalar(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  if constexpr (std::is_same_v<T, Complex>) {
    const double re = n(rng);
    return {re, n(rng)};
  } else {
    return n(rng);
  }
}

/// Random train with the given physical dims and interior bonds.
template <typename T = double>
TensorTrain<T> random_tt(const std::vector<Index>& dims, const std::vector<Index>& bonds,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Core<T>> cores;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const Index l = i == 0 ? 1 : bonds[i - 1];
    const Index r = i + 1 == dims.size() ? 1 : bonds[i];
    Core<T> c(l, dims[i], r);
    for (Index a = 0; a < l; ++a)
      for (Index s = 0; s < dims[i]; ++s)
        for (Index b = 0; b < r; ++b) c(a, s, b) = random_scalar<T>(rng);
    cores.push_back(std::move(c));
  }
  return TensorTrain<T>(std::move(cores));
}

inline RealTensorTrain random_tt(int n, Index d, Index chi, std::uint64_t seed) {
  return random_tt<double>(std::vector<Index>(n, d), std::vector<Index>(n - 1, chi), seed);
}

/// Row-major multi-index of a flat offset (first index most significant).
inline MultiIndex unflatten(std::size_t flat, const std::vector<Index>& dims) {
  MultiIndex idx(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    idx[k] = static_cast<std::uint8_t>(flat % dims[k]);
    flat /= dims[k];
  }
  return idx;
}

inline std::size_t grid_size(const std::vector<Index>& dims) {
  std::size_t n = 1;
  for (Index d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

/// Element by explicit triple loops over core entries.
template <typename T>
T brute_element(const TensorTrain<T>& tt, const MultiIndex& idx) {
  std::vector<T> row{T{1}};
  for (std::size_t i = 0; i < tt.size(); ++i) {
    const auto& c = tt.core(i);
    std::vector<T> next(c.right_dim(), T{0});
    for (Index a = 0; a < c.left_dim(); ++a)
      for (Index b = 0; b < c.right_dim(); ++b) next[b] += row[a] * c(a, idx[i], b);
    row = std::move(next);
  }
  return row[0];
}

template <typename T>
std::vector<T> brute_dense(const TensorTrain<T>& tt) {
  const auto dims = tt.dims();
  std::vector<T> out(grid_size(dims));
  for (std::size_t f = 0; f < out.size(); ++f) out[f] = brute_element(tt, unflatten(f, dims));
  return out;
}

inline Eigen::Matrix2cd sigma(int g) {
  const Complex i{0.0, 1.0};
  Eigen::Matrix2cd m;
  switch (g) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Eigen::MatrixXcd pauli_product(const MultiIndex& g) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (auto v : g) m = kron(m, sigma(v));
  return m;
}

/// rho = sum_g A(g) sigma^g from all 4^N coefficients.
template <typename T>
Eigen::MatrixXcd rho_from_coefficients(const std::vector<T>& a, int n) {
  const std::vector<Index> dims(n, 4);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(Index{1} << n, Index{1} << n);
  for (std::size_t f = 0; f < a.size(); ++f) {
    if (a[f] == T{0}) continue;
    rho += Complex(a[f]) * pauli_product(unflatten(f, dims));
  }
  return rho;
}

template <typename T>
Eigen::MatrixXcd rho_of(const TensorTrain<T>& pauli_tt) {
  return rho_from_coefficients(brute_dense(pauli_tt), static_cast<int>(pauli_tt.size()));
}

/// Tr(rho sigma^g) / 2^N by explicit traces.
inline std::vector<Complex> coefficients_of(const Eigen::MatrixXcd& rho, int n) {
  const std::vector<Index> dims(n, 4);
  std::vector<Complex> out(grid_size(dims));
  for (std::size_t f = 0; f < out.size(); ++f)
    out[f] = (rho * pauli_product(unflatten(f, dims))).trace() / std::ldexp(1.0, n);
  return out;
}

/// Computational-basis MPO (physical index 2s+s') to a dense matrix.
inline Eigen::MatrixXcd dense_mpo(const ComplexTensorTrain& mpo) {
  const int n = static_cast<int>(mpo.size());
  const Index dim = Index{1} << n;
  Eigen::MatrixXcd m(dim, dim);
  MultiIndex idx(n);
  for (Index r = 0; r < dim; ++r)
    for (Index c = 0; c < dim; ++c) {
      for (int k = 0; k < n; ++k) {
        const int s = (r >> (n - 1 - k)) & 1;
        const int t = (c >> (n - 1 - k)) & 1;
        idx[k] = static_cast<std::uint8_t>(2 * s + t);
      }
      m(r, c) = brute_element(mpo, idx);
    }
  return m;
}

/// Singular values of rho realigned across the cut after `left` qubits:
/// rows (r_1..r_left, c_1..c_left), columns the remaining row/column bits.
inline Eigen::VectorXd operator_schmidt_values(const Eigen::MatrixXcd& rho, int n, int left) {
  const Index lo = Index{1} << left, hi = Index{1} << (n - left);
  Eigen::MatrixXcd m(lo * lo, hi * hi);
  for (Index r = 0; r < rho.rows(); ++r)
    for (Index c = 0; c < rho.cols(); ++c)
      m((r / hi) * lo + c / hi, (r % hi) * hi + c % hi) = rho(r, c);
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues();
}

/// Sum of (e_i - 2^N A(g_i))^2 in extended precision, with entry k of the
/// core at `site` (row-major data order) replaced by `value`.
inline long double extended_loss(const RealTensorTrain& tt, const std::vector<MultiIndex>& strings,
                                 const std::vector<double>& expectations, std::size_t site,
                                 std::size_t k, long double value) {
  long double sum = 0.0L;
  for (std::size_t i = 0; i < strings.size(); ++i) {
    std::vector<long double> row{1.0L};
    for (std::size_t p = 0; p < tt.size(); ++p) {
      const auto& c = tt.core(p);
      std::vector<long double> next(static_cast<std::size_t>(c.right_dim()), 0.0L);
      for (Index a = 0; a < c.left_dim(); ++a)
        for (Index b = 0; b < c.right_dim(); ++b) {
          const auto flat = static_cast<std::size_t>((a * c.phys_dim() + strings[i][p]) * c.right_dim() + b);
          const long double x = (p == site && flat == k) ? value : c.data()[flat];
          next[static_cast<std::size_t>(b)] += row[static_cast<std::size_t>(a)] * x;
        }
      row = std::move(next);
    }
    const long double r = expectations[i] - std::ldexp(row[0], static_cast<int>(tt.size()));
    sum += r * r;
  }
  return sum;
}

inline double frobenius_rel(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

}  // namespace ttqst::testing
