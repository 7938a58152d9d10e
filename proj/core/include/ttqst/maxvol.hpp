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
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "ttqst/tensor_train.hpp"

namespace ttqst {

struct MaxvolResult {
  /// Selected rows.
  std::vector<Index> rows;
  /// True when the input was numerically rank deficient and the rows come
  /// from column-pivoted QR instead of the dominance iteration.
  bool degenerate = false;
  int swaps = 0;
};

/// Quasi-maximal-volume row selection for a tall n x r matrix (n >= r).
///
/// Starts from column-pivoted QR rows of m^T, then swaps rows while some
/// entry of m * m[rows,:]^{-1} exceeds 1 + tol in modulus. Ties go to the
/// lowest row index. When at most 256 row subsets exist the exact
/// maximal-volume set is returned instead, in increasing order.
MaxvolResult maxvol(const Eigen::MatrixXd& m, double tol = 1e-2, int max_swaps = 0);

/// Matrix entries available only through queries.
struct MatrixOracle {
  Index rows = 0;
  Index cols = 0;
  std::function<double(Index, Index)> eval;
};

/// A ~ C U^+ R with C = A(:,J), R = A(I,:), U = A(I,J).
struct CurFactors {
  Eigen::MatrixXd c;
  Eigen::MatrixXd u_pinv;
  Eigen::MatrixXd r;
  bool zero_pivot = false;

  Eigen::MatrixXd reconstruct() const { return c * u_pinv * r; }
};

/// Builds the factors from queried rows, columns and their intersection only.
/// U^+ drops singular values below pinv_cutoff * s_max.
CurFactors cur_approximate(const MatrixOracle& a, const std::vector<Index>& rows,
                           const std::vector<Index>& cols, double pinv_cutoff = 1e-12);

struct CrossPivots {
  std::vector<Index> rows;
  std::vector<Index> cols;
};

/// Alternating maxvol over columns then rows, starting from random columns.
CrossPivots cross_pivots(const MatrixOracle& a, Index rank, std::uint64_t seed,
                         int iterations = 4, double tol = 1e-2);

/// Pseudo-inverse with relative singular-value cutoff.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, double rel_cutoff);

}  // namespace ttqst
