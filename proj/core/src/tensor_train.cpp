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

#include "ttqst/tensor_train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/QR>
#include <Eigen/SVD>
#include <fmt/format.h>

namespace ttqst {

namespace {

constexpr std::size_t kMaxMaterializedEntries = std::size_t{1} << 24;  // 4^12

// Singular values below extent * eps * s_1 are roundoff and never kept, so
// tol = 0 yields the numerical rank.
Index truncation_rank(const Eigen::VectorXd& s, double tol, Index max_rank, Index extent) {
  if (s.size() == 0) return 1;
  Index r = 0;
  const double floor = static_cast<double>(extent) * std::numeric_limits<double>::epsilon();
  const double cutoff = std::max(tol, floor) * s(0);
  while (r < s.size() && s(r) > cutoff) ++r;
  r = std::max<Index>(r, 1);
  if (max_rank > 0) r = std::min(r, max_rank);
  return r;
}

}  // namespace

template <typename T>
TensorTrain<T>::TensorTrain(std::vector<Core<T>> cores) : cores_(std::move(cores)) {
  if (cores_.empty()) throw DimensionError("tensor train needs at least one core");
  if (cores_.front().left_dim() != 1) throw DimensionError("first core must have left bond 1");
  if (cores_.back().right_dim() != 1) throw DimensionError("last core must have right bond 1");
  for (std::size_t i = 0; i + 1 < cores_.size(); ++i) {
    if (cores_[i].right_dim() != cores_[i + 1].left_dim()) {
      throw DimensionError(fmt::format("bond mismatch between sites {} and {}: {} vs {}", i,
                                       i + 1, cores_[i].right_dim(), cores_[i + 1].left_dim()));
    }
  }
}

template <typename T>
std::vector<Index> TensorTrain<T>::dims() const {
  std::vector<Index> d;
  d.reserve(cores_.size());
  for (const auto& c : cores_) d.push_back(c.phys_dim());
  return d;
}

template <typename T>
std::vector<Index> TensorTrain<T>::bond_dims() const {
  std::vector<Index> b;
  b.reserve(cores_.size() + 1);
  b.push_back(1);
  for (const auto& c : cores_) b.push_back(c.right_dim());
  return b;
}

template <typename T>
Index TensorTrain<T>::max_bond() const {
  Index m = 1;
  for (const auto& c : cores_) m = std::max({m, c.left_dim(), c.right_dim()});
  return m;
}

template <typename T>
std::size_t TensorTrain<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& c : cores_) n += c.size();
  return n;
}

template <typename T>
TensorTrain<T> TensorTrain<T>::scaled(T c) const {
  auto cores = cores_;
  for (auto& v : cores.front().data()) v *= c;
  return TensorTrain(std::move(cores));
}

template <typename T>
T element(const TensorTrain<T>& tt, std::span<const std::uint8_t> idx) {
  if (idx.size() != tt.size()) {
    throw DimensionError(
        fmt::format("index has length {} but tensor train has {} sites", idx.size(), tt.size()));
  }
  Eigen::Matrix<T, 1, Eigen::Dynamic> v(1);
  v(0) = T{1};
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto& c = tt.core(i);
    if (idx[i] >= c.phys_dim()) {
      throw DimensionError(fmt::format("index {} at site {} exceeds physical dimension {}",
                                       int(idx[i]), i, c.phys_dim()));
    }
    v = (v * c.slice(idx[i])).eval();
  }
  return v(0);
}

template <typename T>
std::vector<T> materialize(const TensorTrain<T>& tt) {
  std::size_t total = 1;
  for (Index d : tt.dims()) {
    total *= static_cast<std::size_t>(d);
    if (total > kMaxMaterializedEntries) {
      throw SizeLimitError("refusing to materialize more than 4^12 tensor entries");
    }
  }
  // prefix holds rows (g_1..g_p) x current bond, row-major.
  RowMatrix<T> prefix = RowMatrix<T>::Ones(1, 1);
  for (const auto& c : tt.cores()) {
    RowMatrix<T> next = prefix * c.right_unfolding();
    prefix = Eigen::Map<RowMatrix<T>>(next.data(), next.rows() * c.phys_dim(), c.right_dim());
  }
  return std::vector<T>(prefix.data(), prefix.data() + prefix.size());
}

template <typename T>
T trace_product(const TensorTrain<T>& a, const TensorTrain<T>& b) {
  if (a.size() != b.size()) {
    throw DimensionError(fmt::format("trace product of {}-site and {}-site trains", a.size(),
                                     b.size()));
  }
  Matrix<T> env = Matrix<T>::Ones(1, 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& ca = a.core(i);
    const auto& cb = b.core(i);
    if (ca.phys_dim() != cb.phys_dim()) {
      throw DimensionError(fmt::format("physical dimension mismatch at site {}", i));
    }
    Matrix<T> next = Matrix<T>::Zero(ca.right_dim(), cb.right_dim());
    for (Index s = 0; s < ca.phys_dim(); ++s) {
      next.noalias() += ca.slice(s).adjoint() * (env * cb.slice(s));
    }
    env = std::move(next);
  }
  return env(0, 0);
}

template <typename T>
TensorTrain<T> round(const TensorTrain<T>& tt, double tol, Index max_rank) {
  auto cores = tt.cores();
  const std::size_t n = cores.size();
  // Right-to-left: make cores 1..N-1 right-orthonormal.
  for (std::size_t p = n - 1; p >= 1; --p) {
    const auto& c = cores[p];
    Matrix<T> mt = c.right_unfolding().transpose();  // (d r) x l
    Eigen::HouseholderQR<Matrix<T>> qr(mt);
    const Index k = std::min(mt.rows(), mt.cols());
    Matrix<T> q = qr.householderQ() * Matrix<T>::Identity(mt.rows(), k);
    Matrix<T> r = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
    cores[p] = Core<T>::from_right_unfolding(q.transpose(), c.phys_dim(), c.right_dim());
    const auto& prev = cores[p - 1];
    Matrix<T> merged = prev.left_unfolding() * r.transpose();
    cores[p - 1] = Core<T>::from_left_unfolding(merged, prev.left_dim(), prev.phys_dim());
  }
  // Left-to-right truncated SVD.
  for (std::size_t p = 0; p + 1 < n; ++p) {
    const auto& c = cores[p];
    Matrix<T> m = c.left_unfolding();
    Eigen::BDCSVD<Matrix<T>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Index r = truncation_rank(svd.singularValues(), tol, max_rank, std::max(m.rows(), m.cols()));
    Matrix<T> u = svd.matrixU().leftCols(r);
    Matrix<T> sv = svd.singularValues().head(r).asDiagonal() * svd.matrixV().leftCols(r).adjoint();
    cores[p] = Core<T>::from_left_unfolding(u, c.left_dim(), c.phys_dim());
    const auto& next = cores[p + 1];
    Matrix<T> merged = sv * next.right_unfolding();
    cores[p + 1] = Core<T>::from_right_unfolding(merged, next.phys_dim(), next.right_dim());
  }
  return TensorTrain<T>(std::move(cores));
}

RealTensorTrain balance(const RealTensorTrain& tt) {
  auto cores = tt.cores();
  const std::size_t n = cores.size();
  for (std::size_t p = 0; p + 1 < n; ++p) {
    const auto& c = cores[p];
    Matrix<double> m = c.left_unfolding();
    Eigen::HouseholderQR<Matrix<double>> qr(m);
    const Index k = std::min(m.rows(), m.cols());
    Matrix<double> q = qr.householderQ() * Matrix<double>::Identity(m.rows(), k);
    Matrix<double> r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    cores[p] = Core<double>::from_left_unfolding(q, c.left_dim(), c.phys_dim());
    const auto& next = cores[p + 1];
    Matrix<double> merged = r * next.right_unfolding();
    cores[p + 1] = Core<double>::from_right_unfolding(merged, next.phys_dim(), next.right_dim());
  }
  double norm = 0.0;
  for (double v : cores.back().data()) norm += v * v;
  norm = std::sqrt(norm);
  if (norm == 0.0) return RealTensorTrain(std::move(cores));
  const double share = std::pow(norm, 1.0 / static_cast<double>(n));
  for (std::size_t p = 0; p < n; ++p) {
    const double f = (p + 1 == n) ? share / norm : share;
    for (double& v : cores[p].data()) v *= f;
  }
  return RealTensorTrain(std::move(cores));
}

double imaginary_residue(const ComplexTensorTrain& tt) {
  double max_mod = 0.0;
  double max_im = 0.0;
  for (const auto& c : tt.cores()) {
    for (const Complex& v : c.data()) {
      max_mod = std::max(max_mod, std::abs(v));
      max_im = std::max(max_im, std::abs(v.imag()));
    }
  }
  return max_mod == 0.0 ? 0.0 : max_im / max_mod;
}

RealTensorTrain cast_real(const ComplexTensorTrain& tt, double rel_tol) {
  const double residue = imaginary_residue(tt);
  if (residue > rel_tol) {
    throw NumericalError(
        fmt::format("imaginary residue {:.3e} exceeds tolerance {:.1e}", residue, rel_tol));
  }
  std::vector<Core<double>> cores;
  cores.reserve(tt.size());
  for (const auto& c : tt.cores()) {
    std::vector<double> data(c.size());
    std::transform(c.data().begin(), c.data().end(), data.begin(),
                   [](const Complex& v) { return v.real(); });
    cores.emplace_back(c.left_dim(), c.phys_dim(), c.right_dim(), std::move(data));
  }
  return RealTensorTrain(std::move(cores));
}

ComplexTensorTrain to_complex(const RealTensorTrain& tt) {
  std::vector<Core<Complex>> cores;
  cores.reserve(tt.size());
  for (const auto& c : tt.cores()) {
    std::vector<Complex> data(c.data().begin(), c.data().end());
    cores.emplace_back(c.left_dim(), c.phys_dim(), c.right_dim(), std::move(data));
  }
  return ComplexTensorTrain(std::move(cores));
}

RealTensorTrain real_part(const ComplexTensorTrain& tt, double tol) {
  const std::size_t n = tt.size();
  if (n == 1) {
    const auto& c = tt.core(0);
    std::vector<double> data(c.size());
    std::transform(c.data().begin(), c.data().end(), data.begin(),
                   [](const Complex& v) { return v.real(); });
    return RealTensorTrain({Core<double>(1, c.phys_dim(), 1, std::move(data))});
  }
  // z -> [[Re, -Im], [Im, Re]] is a ring homomorphism; Re(z) is its (0,0) entry.
  std::vector<Core<double>> cores;
  cores.reserve(n);
  for (std::size_t p = 0; p < n; ++p) {
    const auto& c = tt.core(p);
    const Index l = c.left_dim(), d = c.phys_dim(), r = c.right_dim();
    const bool first = (p == 0), last = (p + 1 == n);
    const Index l2 = first ? 1 : 2 * l;
    const Index r2 = last ? 1 : 2 * r;
    Core<double> out(l2, d, r2);
    for (Index s = 0; s < d; ++s) {
      for (Index a = 0; a < l; ++a) {
        for (Index b = 0; b < r; ++b) {
          const Complex z = c(a, s, b);
          if (first) {
            out(0, s, b) = z.real();
            out(0, s, r + b) = -z.imag();
          } else if (last) {
            out(a, s, 0) = z.real();
            out(l + a, s, 0) = z.imag();
          } else {
            out(a, s, b) = z.real();
            out(a, s, r + b) = -z.imag();
            out(l + a, s, b) = z.imag();
            out(l + a, s, r + b) = z.real();
          }
        }
      }
    }
    cores.push_back(std::move(out));
  }
  return round(RealTensorTrain(std::move(cores)), tol);
}

RealTensorTrain dense_to_tt(std::span<const double> tensor, std::span<const Index> dims,
                            double tol) {
  if (dims.empty()) throw DimensionError("dense_to_tt needs at least one dimension");
  if (tol < 0) throw ConfigError("dense_to_tt tolerance must be non-negative");
  std::size_t total = 1;
  for (Index d : dims) {
    if (d < 1) throw DimensionError("dimensions must be positive");
    total *= static_cast<std::size_t>(d);
    if (total > kMaxMaterializedEntries) {
      throw SizeLimitError("refusing to decompose more than 4^12 tensor entries");
    }
  }
  if (total != tensor.size()) {
    throw DimensionError(fmt::format("tensor has {} entries, dims imply {}", tensor.size(), total));
  }
  const std::size_t n = dims.size();
  std::vector<Core<double>> cores;
  cores.reserve(n);
  Index left = 1;
  Index remaining = static_cast<Index>(total);
  RowMatrix<double> m = Eigen::Map<const RowMatrix<double>>(tensor.data(), dims[0],
                                                            remaining / dims[0]);
  for (std::size_t p = 0; p + 1 < n; ++p) {
    remaining /= dims[p];
    Eigen::BDCSVD<Matrix<double>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Index r = truncation_rank(svd.singularValues(), tol, -1, std::max(m.rows(), m.cols()));
    cores.push_back(Core<double>::from_left_unfolding(svd.matrixU().leftCols(r), left, dims[p]));
    RowMatrix<double> rest =
        svd.singularValues().head(r).asDiagonal() * svd.matrixV().leftCols(r).transpose();
    m = Eigen::Map<RowMatrix<double>>(rest.data(), r * dims[p + 1], remaining / dims[p + 1]);
    left = r;
  }
  cores.push_back(Core<double>::from_left_unfolding(m, left, dims[n - 1]));
  return RealTensorTrain(std::move(cores));
}

template <typename T>
TensorTrain<T> product_tt(const std::vector<std::vector<T>>& site_vectors) {
  std::vector<Core<T>> cores;
  cores.reserve(site_vectors.size());
  for (const auto& v : site_vectors) {
    cores.emplace_back(1, static_cast<Index>(v.size()), 1, v);
  }
  return TensorTrain<T>(std::move(cores));
}

template class TensorTrain<double>;
template class TensorTrain<Complex>;
template double element(const RealTensorTrain&, std::span<const std::uint8_t>);
template Complex element(const ComplexTensorTrain&, std::span<const std::uint8_t>);
template std::vector<double> materialize(const RealTensorTrain&);
template std::vector<Complex> materialize(const ComplexTensorTrain&);
template double trace_product(const RealTensorTrain&, const RealTensorTrain&);
template Complex trace_product(const ComplexTensorTrain&, const ComplexTensorTrain&);
template RealTensorTrain round(const RealTensorTrain&, double, Index);
template ComplexTensorTrain round(const ComplexTensorTrain&, double, Index);
template RealTensorTrain product_tt(const std::vector<std::vector<double>>&);
template ComplexTensorTrain product_tt(const std::vector<std::vector<Complex>>&);

}  // namespace ttqst
