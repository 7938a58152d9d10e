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

#include "ttqst/maxvol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

namespace ttqst {

namespace {

// Small problems are searched exhaustively for the largest |det|.
constexpr double kExhaustiveSubsets = 256;

double subset_count(Index n, Index r) {
  double c = 1.0;
  for (Index k = 0; k < r; ++k) c = c * static_cast<double>(n - k) / static_cast<double>(k + 1);
  return c;
}

// Lexicographically first row set of maximal volume.
std::vector<Index> best_subset(const Eigen::MatrixXd& m) {
  const Index n = m.rows(), r = m.cols();
  std::vector<Index> cur(static_cast<std::size_t>(r));
  std::iota(cur.begin(), cur.end(), Index{0});
  std::vector<Index> best = cur;
  double best_vol = -1.0;
  Eigen::MatrixXd sub(r, r);
  while (true) {
    for (Index j = 0; j < r; ++j) sub.row(j) = m.row(cur[static_cast<std::size_t>(j)]);
    const double vol = std::abs(sub.partialPivLu().determinant());
    if (vol > best_vol) {
      best_vol = vol;
      best = cur;
    }
    Index k = r - 1;
    while (k >= 0 && cur[static_cast<std::size_t>(k)] == n - r + k) --k;
    if (k < 0) break;
    ++cur[static_cast<std::size_t>(k)];
    for (Index j = k + 1; j < r; ++j)
      cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

}  // namespace

MaxvolResult maxvol(const Eigen::MatrixXd& m, double tol, int max_swaps) {
  const Index n = m.rows();
  const Index r = m.cols();
  if (r == 0) return {};
  if (n < r) {
    throw DimensionError(fmt::format("maxvol needs rows >= cols, got {}x{}", n, r));
  }
  if (max_swaps <= 0) max_swaps = static_cast<int>(10 * n);

  MaxvolResult out;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m.transpose());
  out.rows.resize(static_cast<std::size_t>(r));
  for (Index j = 0; j < r; ++j) out.rows[static_cast<std::size_t>(j)] = qr.colsPermutation().indices()(j);
  if (qr.rank() < r) {
    out.degenerate = true;
    return out;
  }

  if (subset_count(n, r) <= kExhaustiveSubsets) {
    out.rows = best_subset(m);
    return out;
  }

  Eigen::MatrixXd pivot(r, r);
  for (Index j = 0; j < r; ++j) pivot.row(j) = m.row(out.rows[static_cast<std::size_t>(j)]);
  // B = m * pivot^{-1}, computed as (pivot^T \ m^T)^T.
  Eigen::MatrixXd b = pivot.transpose().partialPivLu().solve(m.transpose()).transpose();

  for (; out.swaps < max_swaps; ++out.swaps) {
    Index bi = 0, bj = 0;
    double best = -1.0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < r; ++j) {
        const double v = std::abs(b(i, j));
        if (v > best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    if (best <= 1.0 + tol) break;
    // Replace pivot row bj by row bi; rank-one update of B.
    Eigen::VectorXd col = b.col(bj);
    Eigen::RowVectorXd row = b.row(bi);
    row(bj) -= 1.0;
    b.noalias() -= col * row / b(bi, bj);
    out.rows[static_cast<std::size_t>(bj)] = bi;
  }
  return out;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, double rel_cutoff) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  if (s.size() > 0 && s(0) > 0.0) {
    const double cutoff = rel_cutoff * s(0);
    for (Index k = 0; k < s.size(); ++k) {
      if (s(k) > cutoff) inv(k) = 1.0 / s(k);
    }
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

CurFactors cur_approximate(const MatrixOracle& a, const std::vector<Index>& rows,
                           const std::vector<Index>& cols, double pinv_cutoff) {
  if (rows.size() != cols.size() || rows.empty()) {
    throw DimensionError("cross approximation needs |I| = |J| >= 1");
  }
  const Index r = static_cast<Index>(rows.size());
  CurFactors f;
  f.c.resize(a.rows, r);
  f.r.resize(r, a.cols);
  Eigen::MatrixXd u(r, r);
  for (Index j = 0; j < r; ++j) {
    for (Index i = 0; i < a.rows; ++i) f.c(i, j) = a.eval(i, cols[static_cast<std::size_t>(j)]);
  }
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < a.cols; ++j) f.r(i, j) = a.eval(rows[static_cast<std::size_t>(i)], j);
  }
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < r; ++j) u(i, j) = f.r(i, cols[static_cast<std::size_t>(j)]);
  }
  if (u.isZero(0.0)) {
    spdlog::warn("cross approximation pivot block is identically zero");
    f.zero_pivot = true;
    f.u_pinv = Eigen::MatrixXd::Zero(r, r);
    return f;
  }
  f.u_pinv = pseudo_inverse(u, pinv_cutoff);
  return f;
}

CrossPivots cross_pivots(const MatrixOracle& a, Index rank, std::uint64_t seed, int iterations,
                         double tol) {
  rank = std::min({rank, a.rows, a.cols});
  std::vector<Index> all(static_cast<std::size_t>(a.cols));
  std::iota(all.begin(), all.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  CrossPivots p;
  p.cols.assign(all.begin(), all.begin() + rank);
  for (int it = 0; it < iterations; ++it) {
    Eigen::MatrixXd c(a.rows, rank);
    for (Index j = 0; j < rank; ++j) {
      for (Index i = 0; i < a.rows; ++i) c(i, j) = a.eval(i, p.cols[static_cast<std::size_t>(j)]);
    }
    p.rows = maxvol(c, tol).rows;
    Eigen::MatrixXd rt(a.cols, rank);
    for (Index i = 0; i < rank; ++i) {
      for (Index j = 0; j < a.cols; ++j) rt(j, i) = a.eval(p.rows[static_cast<std::size_t>(i)], j);
    }
    p.cols = maxvol(rt, tol).rows;
  }
  return p;
}

}  // namespace ttqst
