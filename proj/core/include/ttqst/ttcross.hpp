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
#include <iosfwd>
#include <vector>

#include "ttqst/oracle.hpp"
#include "ttqst/tensor_train.hpp"

namespace ttqst {

struct CrossConfig {
  Index max_rank = 10;
  /// Singular values below local_tol * s_1 are dropped from a two-site
  /// block; also the sweep-to-sweep relative change that counts as converged.
  double local_tol = 1e-3;
  int max_sweeps = 8;
  double maxvol_tol = 1e-2;
  /// Relative singular-value cutoff for pivot pseudo-inverses.
  double pinv_cutoff = 1e-12;
  std::uint64_t seed = 0;
  /// Size of the fixed random index set used to measure sweep-to-sweep change.
  int validation_size = 64;

  void validate() const;
};

/// Nested interpolation sets. For a cut k in 1..N-1 (between sites k-1 and
/// k, zero-based), left[k] holds prefixes of length k and right[k] holds
/// suffixes covering sites k..N-1; both have r_k entries. left[0] and
/// right[N] contain the single empty tuple.
struct CrossSkeleton {
  std::vector<Index> dims;
  std::vector<std::vector<MultiIndex>> left;
  std::vector<std::vector<MultiIndex>> right;

  std::size_t sites() const noexcept { return dims.size(); }
  Index rank(std::size_t cut) const { return static_cast<Index>(left.at(cut).size()); }
  /// r_1 .. r_{N-1}.
  std::vector<Index> ranks() const;
  /// Every left tuple extends some tuple of the previous cut by one index,
  /// and every right tuple is one index followed by a tuple of the next cut.
  bool is_nested() const;
  /// Full indices left[k] x right[k] for every cut.
  std::vector<MultiIndex> cross_indices() const;

  friend bool operator==(const CrossSkeleton&, const CrossSkeleton&) = default;
};

/// Text form, one line per cut:
///   <cut> <rank> I <t> <t> ... J <t> <t> ...
/// where each tuple t is dot-separated indices. Preceded by a "# ttqst
/// cross skeleton v1" header and a "dims d_1 ... d_N" line.
void write_skeleton(std::ostream& out, const CrossSkeleton& skeleton);
CrossSkeleton read_skeleton(std::istream& in);

struct CrossResult {
  RealTensorTrain tt;
  CrossSkeleton skeleton;
  int sweeps = 0;
  bool converged = false;
  /// Some maxvol call saw a rank-deficient matrix.
  bool degenerate_pivots = false;
  /// Relative change on the validation set after sweeps 2, 3, ...
  std::vector<double> sweep_changes;
  /// oracle.distinct_count() after each sweep.
  std::vector<std::size_t> distinct_after_sweep;
};

/// Two-site (DMRG-style) tensor-train cross approximation.
///
/// Each sweep runs left-to-right then right-to-left over the cuts. At a cut
/// the (r_{k-1} d) x (d r_{k+1}) block of oracle values is truncated by SVD
/// keeping singular values above local_tol * s_1 (at most max_rank), and
/// maxvol on the singular vectors picks the new row and column sets. A final
/// left-to-right pass reselects the row sets against the current column
/// sets so both sides are nested, and assembles core k as C_k U_k^+.
/// Stops when the skeleton repeats, when the validation change drops below
/// local_tol, or after max_sweeps (returning the least-changing iterate,
/// with converged = false).
CrossResult ttcross_dmrg(ElementOracle& oracle, const CrossConfig& cfg);

}  // namespace ttqst
