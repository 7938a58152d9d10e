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

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ttqst/error.hpp"

namespace ttqst {

using Index = Eigen::Index;
using MultiIndex = std::vector<std::uint8_t>;
using Complex = std::complex<double>;

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using RowMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Order-3 tensor-train core.
///
/// Layout is fixed as (left bond, physical, right bond), row-major:
/// entry (a, s, b) lives at offset (a * phys + s) * right + b. Both standard
/// unfoldings are therefore plain row-major views of the same buffer:
///   left unfolding  (left*phys) x right, row a*phys+s
///   right unfolding left x (phys*right), column s*right+b
template <typename T>
class Core {
 public:
  using Scalar = T;
  using SliceMap = Eigen::Map<RowMatrix<T>, 0, Eigen::OuterStride<>>;
  using ConstSliceMap = Eigen::Map<const RowMatrix<T>, 0, Eigen::OuterStride<>>;
  using UnfoldingMap = Eigen::Map<const RowMatrix<T>>;

  Core() = default;

  Core(Index left, Index phys, Index right)
      : left_(left), phys_(phys), right_(right),
        data_(static_cast<std::size_t>(left * phys * right), T{0}) {
    check_shape();
  }

  Core(Index left, Index phys, Index right, std::vector<T> data)
      : left_(left), phys_(phys), right_(right), data_(std::move(data)) {
    check_shape();
    if (data_.size() != static_cast<std::size_t>(left * phys * right)) {
      throw DimensionError("core data size does not match its shape");
    }
  }

  /// Builds a core from a (left*phys) x right matrix.
  template <typename Derived>
  static Core from_left_unfolding(const Eigen::MatrixBase<Derived>& m, Index left, Index phys) {
    if (m.rows() != left * phys) throw DimensionError("left unfolding has wrong row count");
    Core c(left, phys, m.cols());
    Eigen::Map<RowMatrix<T>>(c.data_.data(), m.rows(), m.cols()) = m;
    return c;
  }

  /// Builds a core from a left x (phys*right) matrix.
  template <typename Derived>
  static Core from_right_unfolding(const Eigen::MatrixBase<Derived>& m, Index phys, Index right) {
    if (m.cols() != phys * right) throw DimensionError("right unfolding has wrong column count");
    Core c(m.rows(), phys, right);
    Eigen::Map<RowMatrix<T>>(c.data_.data(), m.rows(), m.cols()) = m;
    return c;
  }

  Index left_dim() const noexcept { return left_; }
  Index phys_dim() const noexcept { return phys_; }
  Index right_dim() const noexcept { return right_; }
  std::size_t size() const noexcept { return data_.size(); }

  T& operator()(Index a, Index s, Index b) { return data_[offset(a, s, b)]; }
  const T& operator()(Index a, Index s, Index b) const { return data_[offset(a, s, b)]; }

  /// Matrix G^s of shape left x right.
  SliceMap slice(Index s) {
    return SliceMap(data_.data() + s * right_, left_, right_, Eigen::OuterStride<>(phys_ * right_));
  }
  ConstSliceMap slice(Index s) const {
    return ConstSliceMap(data_.data() + s * right_, left_, right_,
                         Eigen::OuterStride<>(phys_ * right_));
  }

  UnfoldingMap left_unfolding() const { return UnfoldingMap(data_.data(), left_ * phys_, right_); }
  UnfoldingMap right_unfolding() const { return UnfoldingMap(data_.data(), left_, phys_ * right_); }

  std::span<const T> data() const noexcept { return data_; }
  std::span<T> data() noexcept { return data_; }

  friend bool operator==(const Core&, const Core&) = default;

 private:
  std::size_t offset(Index a, Index s, Index b) const {
    return static_cast<std::size_t>((a * phys_ + s) * right_ + b);
  }
  void check_shape() const {
    if (left_ < 1 || phys_ < 1 || right_ < 1) throw DimensionError("core dimensions must be positive");
  }

  Index left_ = 0;
  Index phys_ = 0;
  Index right_ = 0;
  std::vector<T> data_;
};

/// Chain of order-3 cores with boundary bonds of size one:
/// A(g_1..g_N) = G_1^{g_1} G_2^{g_2} ... G_N^{g_N}.
template <typename T>
class TensorTrain {
 public:
  using Scalar = T;

  explicit TensorTrain(std::vector<Core<T>> cores);

  std::size_t size() const noexcept { return cores_.size(); }
  const Core<T>& core(std::size_t i) const { return cores_.at(i); }
  const std::vector<Core<T>>& cores() const noexcept { return cores_; }

  /// Physical dimension of every site.
  std::vector<Index> dims() const;
  /// chi_0 .. chi_N (N+1 entries, both ends equal to one).
  std::vector<Index> bond_dims() const;
  Index max_bond() const;
  std::size_t parameter_count() const;

  /// Copy with every element multiplied by c (applied to the first core).
  TensorTrain scaled(T c) const;

  friend bool operator==(const TensorTrain&, const TensorTrain&) = default;

 private:
  std::vector<Core<T>> cores_;
};

using RealTensorTrain = TensorTrain<double>;
using ComplexTensorTrain = TensorTrain<Complex>;

/// Element A(idx) as the product of selected core slices.
template <typename T>
T element(const TensorTrain<T>& tt, std::span<const std::uint8_t> idx);

/// Every element in row-major order (first index most significant).
/// Refuses tensors with more than 4^12 entries.
template <typename T>
std::vector<T> materialize(const TensorTrain<T>& tt);

/// sum_g conj(A1(g)) A2(g), contracted site by site.
template <typename T>
T trace_product(const TensorTrain<T>& a, const TensorTrain<T>& b);

/// TT rounding: right-to-left QR sweep, then left-to-right truncated SVD.
/// Singular values s_k <= tol * s_1 are dropped; ranks never exceed max_rank.
template <typename T>
TensorTrain<T> round(const TensorTrain<T>& tt, double tol, Index max_rank = -1);

/// Gauge where every core carries the same share of the overall norm.
/// The represented tensor is unchanged (up to rounding).
RealTensorTrain balance(const RealTensorTrain& tt);

/// Real TT of Re(A). Uses the 2x2 real embedding of complex bond matrices,
/// which doubles bonds, then rounds with relative tolerance tol.
RealTensorTrain real_part(const ComplexTensorTrain& tt, double tol = 1e-13);

/// Elementwise real part of every core, if every imaginary part is at most
/// rel_tol times the largest modulus; throws NumericalError otherwise.
RealTensorTrain cast_real(const ComplexTensorTrain& tt, double rel_tol = 1e-10);

/// Largest |Im| over all core entries divided by the largest modulus.
double imaginary_residue(const ComplexTensorTrain& tt);

ComplexTensorTrain to_complex(const RealTensorTrain& tt);

/// TT-SVD of a dense real tensor stored row-major with the given dims.
/// Uses the relative cutoff s_k > tol * s_1 at every cut.
RealTensorTrain dense_to_tt(std::span<const double> tensor, std::span<const Index> dims,
                            double tol);

/// Product tensor with one vector per site (all bonds equal to one).
template <typename T>
TensorTrain<T> product_tt(const std::vector<std::vector<T>>& site_vectors);

}  // namespace ttqst
