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

#include "ttqst/ttcross.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "ttqst/maxvol.hpp"

namespace ttqst {

void CrossConfig::validate() const {
  if (max_rank < 1) throw ConfigError("max_rank must be at least 1");
  if (!(local_tol > 0)) throw ConfigError("local_tol must be positive");
  if (!(maxvol_tol > 0)) throw ConfigError("maxvol_tol must be positive");
  if (!(pinv_cutoff > 0)) throw ConfigError("pinv_cutoff must be positive");
  if (max_sweeps < 1) throw ConfigError("max_sweeps must be at least 1");
  if (validation_size < 1) throw ConfigError("validation_size must be at least 1");
}

std::vector<Index> CrossSkeleton::ranks() const {
  std::vector<Index> r;
  for (std::size_t k = 1; k < sites(); ++k) r.push_back(rank(k));
  return r;
}

bool CrossSkeleton::is_nested() const {
  const std::size_t n = sites();
  for (std::size_t k = 1; k < n; ++k) {
    for (const auto& t : left[k]) {
      MultiIndex prefix(t.begin(), t.end() - 1);
      if (std::find(left[k - 1].begin(), left[k - 1].end(), prefix) == left[k - 1].end()) {
        return false;
      }
    }
    for (const auto& t : right[k]) {
      MultiIndex suffix(t.begin() + 1, t.end());
      if (std::find(right[k + 1].begin(), right[k + 1].end(), suffix) == right[k + 1].end()) {
        return false;
      }
    }
  }
  return true;
}

std::vector<MultiIndex> CrossSkeleton::cross_indices() const {
  std::vector<MultiIndex> out;
  for (std::size_t k = 1; k < sites(); ++k) {
    for (const auto& l : left[k]) {
      for (const auto& r : right[k]) {
        MultiIndex full(l);
        full.insert(full.end(), r.begin(), r.end());
        out.push_back(std::move(full));
      }
    }
  }
  return out;
}

namespace {

std::string tuple_text(const MultiIndex& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s.push_back('.');
    s += std::to_string(int(t[i]));
  }
  return s;
}

MultiIndex parse_tuple(const std::string& s) {
  MultiIndex t;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, '.')) {
    const int v = std::stoi(part);
    if (v < 0 || v > 255) throw Error("skeleton index out of range");
    t.push_back(static_cast<std::uint8_t>(v));
  }
  return t;
}

}  // namespace

void write_skeleton(std::ostream& out, const CrossSkeleton& sk) {
  out << "# ttqst cross skeleton v1\n";
  out << "dims";
  for (Index d : sk.dims) out << ' ' << d;
  out << '\n';
  for (std::size_t k = 1; k < sk.sites(); ++k) {
    out << k << ' ' << sk.rank(k) << " I";
    for (const auto& t : sk.left[k]) out << ' ' << tuple_text(t);
    out << " J";
    for (const auto& t : sk.right[k]) out << ' ' << tuple_text(t);
    out << '\n';
  }
}

CrossSkeleton read_skeleton(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ttqst cross skeleton v1", 0) != 0) {
    throw Error("missing skeleton header");
  }
  CrossSkeleton sk;
  if (!std::getline(in, line)) throw Error("missing skeleton dims line");
  {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag != "dims") throw Error("expected dims line in skeleton");
    Index d = 0;
    while (ls >> d) sk.dims.push_back(d);
  }
  const std::size_t n = sk.dims.size();
  if (n == 0) throw Error("skeleton has no sites");
  sk.left.assign(n + 1, {});
  sk.right.assign(n + 1, {});
  sk.left[0] = {MultiIndex{}};
  sk.right[n] = {MultiIndex{}};
  for (std::size_t k = 1; k < n; ++k) {
    if (!std::getline(in, line)) throw Error(fmt::format("missing skeleton line for cut {}", k));
    std::istringstream ls(line);
    std::size_t cut = 0;
    Index rank = 0;
    std::string tag;
    ls >> cut >> rank >> tag;
    if (cut != k || tag != "I") throw Error(fmt::format("malformed skeleton line for cut {}", k));
    std::string tok;
    auto* target = &sk.left[k];
    while (ls >> tok) {
      if (tok == "J") {
        target = &sk.right[k];
        continue;
      }
      target->push_back(parse_tuple(tok));
    }
    if (static_cast<Index>(sk.left[k].size()) != rank ||
        static_cast<Index>(sk.right[k].size()) != rank) {
      throw Error(fmt::format("cut {} lists a rank inconsistent with its tuples", k));
    }
  }
  return sk;
}

namespace {

class Sweeper {
 public:
  Sweeper(ElementOracle& oracle, const CrossConfig& cfg)
      : oracle_(oracle), cfg_(cfg), n_(oracle.sites()), dims_(oracle.dims()) {
    skeleton_.dims = dims_;
    buffer_.resize(n_);
  }

  void initialize() {
    // Start from one pivot: the better of a seeded random index and the all-zero
    // index, then improve it one site at a time by largest modulus.
    std::mt19937_64 rng(cfg_.seed);
    MultiIndex pivot(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      pivot[i] = static_cast<std::uint8_t>(rng() % static_cast<std::uint64_t>(dims_[i]));
    }
    MultiIndex zero(n_, 0);
    if (std::abs(oracle_(zero)) > std::abs(oracle_(pivot))) pivot = zero;
    double best = std::abs(oracle_(pivot));
    for (std::size_t i = 0; i < n_; ++i) {
      MultiIndex trial = pivot;
      for (Index s = 0; s < dims_[i]; ++s) {
        trial[i] = static_cast<std::uint8_t>(s);
        const double v = std::abs(oracle_(trial));
        if (v > best) {
          best = v;
          pivot[i] = trial[i];
        }
      }
    }
    skeleton_.left.assign(n_ + 1, {});
    skeleton_.right.assign(n_ + 1, {});
    for (std::size_t k = 0; k < n_; ++k) {
      skeleton_.left[k] = {MultiIndex(pivot.begin(), pivot.begin() + static_cast<long>(k))};
      skeleton_.right[k + 1] = {MultiIndex(pivot.begin() + static_cast<long>(k + 1), pivot.end())};
    }
  }

  // Two-site update at cut k (between sites k-1 and k).
  void update_cut(std::size_t k) {
    const auto& lset = skeleton_.left[k - 1];
    const auto& rset = skeleton_.right[k + 1];
    const Index dl = dims_[k - 1], dr = dims_[k];
    const Index rl = static_cast<Index>(lset.size()), rr = static_cast<Index>(rset.size());
    Eigen::MatrixXd block(rl * dl, dr * rr);
    for (Index i = 0; i < rl; ++i) {
      for (Index s = 0; s < dl; ++s) {
        for (Index t = 0; t < dr; ++t) {
          for (Index j = 0; j < rr; ++j) {
            block(i * dl + s, t * rr + j) =
                query(lset[static_cast<std::size_t>(i)], s, t, rset[static_cast<std::size_t>(j)]);
          }
        }
      }
    }
    if (block.cwiseAbs().maxCoeff() == 0.0) return;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(block, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const Index rank = choose_rank(sv, std::min({cfg_.max_rank, block.rows(), block.cols()}));

    const auto rows = maxvol(svd.matrixU().leftCols(rank), cfg_.maxvol_tol);
    const auto cols = maxvol(svd.matrixV().leftCols(rank), cfg_.maxvol_tol);
    degenerate_ = degenerate_ || rows.degenerate || cols.degenerate;

    std::vector<MultiIndex> new_left, new_right;
    new_left.reserve(static_cast<std::size_t>(rank));
    new_right.reserve(static_cast<std::size_t>(rank));
    for (Index row : rows.rows) {
      MultiIndex t = lset[static_cast<std::size_t>(row / dl)];
      t.push_back(static_cast<std::uint8_t>(row % dl));
      new_left.push_back(std::move(t));
    }
    for (Index col : cols.rows) {
      MultiIndex t{static_cast<std::uint8_t>(col / rr)};
      const auto& tail = rset[static_cast<std::size_t>(col % rr)];
      t.insert(t.end(), tail.begin(), tail.end());
      new_right.push_back(std::move(t));
    }
    skeleton_.left[k] = std::move(new_left);
    skeleton_.right[k] = std::move(new_right);
  }

  // Left-to-right one-site pass: reselect left sets against the (nested)
  // right sets and assemble the interpolating cores.
  RealTensorTrain consolidate() {
    std::vector<Core<double>> cores;
    cores.reserve(n_);
    for (std::size_t p = 0; p + 1 < n_; ++p) {
      const Index d = dims_[p];
      const Index rows = static_cast<Index>(skeleton_.left[p].size()) * d;
      if (static_cast<Index>(skeleton_.right[p + 1].size()) > rows) shrink_right(p + 1, rows);
      Eigen::MatrixXd fiber = site_fiber(p);
      const auto mv = maxvol(fiber, cfg_.maxvol_tol);
      degenerate_ = degenerate_ || mv.degenerate;
      Eigen::MatrixXd pivot(fiber.cols(), fiber.cols());
      std::vector<MultiIndex> new_left;
      new_left.reserve(mv.rows.size());
      for (std::size_t j = 0; j < mv.rows.size(); ++j) {
        const Index row = mv.rows[j];
        pivot.row(static_cast<Index>(j)) = fiber.row(row);
        MultiIndex t = skeleton_.left[p][static_cast<std::size_t>(row / d)];
        t.push_back(static_cast<std::uint8_t>(row % d));
        new_left.push_back(std::move(t));
      }
      skeleton_.left[p + 1] = std::move(new_left);
      Eigen::MatrixXd coeff = fiber * pseudo_inverse(pivot, cfg_.pinv_cutoff);
      cores.push_back(Core<double>::from_left_unfolding(
          coeff, static_cast<Index>(skeleton_.left[p].size()), d));
    }
    Eigen::MatrixXd last = site_fiber(n_ - 1);
    cores.push_back(Core<double>::from_left_unfolding(
        last, static_cast<Index>(skeleton_.left[n_ - 1].size()), dims_[n_ - 1]));
    return RealTensorTrain(std::move(cores));
  }

  const CrossSkeleton& skeleton() const { return skeleton_; }
  bool degenerate() const { return degenerate_; }

 private:
  double query(const MultiIndex& prefix, Index s, Index t, const MultiIndex& suffix) {
    std::size_t pos = 0;
    for (auto v : prefix) buffer_[pos++] = v;
    buffer_[pos++] = static_cast<std::uint8_t>(s);
    buffer_[pos++] = static_cast<std::uint8_t>(t);
    for (auto v : suffix) buffer_[pos++] = v;
    return oracle_(buffer_);
  }

  double query(const MultiIndex& prefix, Index s, const MultiIndex& suffix) {
    std::size_t pos = 0;
    for (auto v : prefix) buffer_[pos++] = v;
    buffer_[pos++] = static_cast<std::uint8_t>(s);
    for (auto v : suffix) buffer_[pos++] = v;
    return oracle_(buffer_);
  }

  // (r_p d_p) x r_{p+1} matrix A(left[p] s, right[p+1]).
  Eigen::MatrixXd site_fiber(std::size_t p) {
    const auto& lset = skeleton_.left[p];
    const auto& rset = skeleton_.right[p + 1];
    const Index d = dims_[p];
    Eigen::MatrixXd f(static_cast<Index>(lset.size()) * d, static_cast<Index>(rset.size()));
    for (std::size_t i = 0; i < lset.size(); ++i) {
      for (Index s = 0; s < d; ++s) {
        for (std::size_t j = 0; j < rset.size(); ++j) {
          f(static_cast<Index>(i) * d + s, static_cast<Index>(j)) = query(lset[i], s, rset[j]);
        }
      }
    }
    return f;
  }

  // Drops entries of right[cut] down to `keep`, retaining every suffix that
  // right[cut-1] refers to so nesting survives.
  void shrink_right(std::size_t cut, Index keep) {
    auto& set = skeleton_.right[cut];
    std::vector<bool> needed(set.size(), false);
    for (const auto& t : skeleton_.right[cut - 1]) {
      MultiIndex tail(t.begin() + 1, t.end());
      auto it = std::find(set.begin(), set.end(), tail);
      if (it != set.end()) needed[static_cast<std::size_t>(it - set.begin())] = true;
    }
    std::vector<MultiIndex> kept;
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (needed[i]) kept.push_back(set[i]);
    }
    for (std::size_t i = 0; i < set.size() && static_cast<Index>(kept.size()) < keep; ++i) {
      if (!needed[i]) kept.push_back(set[i]);
    }
    set = std::move(kept);
  }

  Index choose_rank(const Eigen::VectorXd& sv, Index cap) const {
    Index r = 1;
    while (r < sv.size() && sv(r) > cfg_.local_tol * sv(0)) ++r;
    return std::clamp<Index>(r, 1, std::max<Index>(cap, 1));
  }

  ElementOracle& oracle_;
  const CrossConfig& cfg_;
  std::size_t n_;
  std::vector<Index> dims_;
  CrossSkeleton skeleton_;
  MultiIndex buffer_;
  bool degenerate_ = false;
};

std::vector<MultiIndex> validation_indices(const std::vector<Index>& dims, std::uint64_t seed,
                                           int count) {
  std::mt19937_64 rng(seed ^ 0x5bd1e9955bd1e995ULL);
  std::vector<MultiIndex> out(static_cast<std::size_t>(count), MultiIndex(dims.size()));
  for (auto& idx : out) {
    for (std::size_t i = 0; i < dims.size(); ++i) {
      idx[i] = static_cast<std::uint8_t>(rng() % static_cast<std::uint64_t>(dims[i]));
    }
  }
  return out;
}

Eigen::VectorXd evaluate(const RealTensorTrain& tt, const std::vector<MultiIndex>& idx) {
  Eigen::VectorXd v(static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) v(static_cast<Index>(i)) = element(tt, idx[i]);
  return v;
}

}  // namespace

CrossResult ttcross_dmrg(ElementOracle& oracle, const CrossConfig& cfg) {
  cfg.validate();
  const std::size_t n = oracle.sites();
  Sweeper sweeper(oracle, cfg);
  sweeper.initialize();

  if (n == 1) {
    RealTensorTrain tt = sweeper.consolidate();
    return CrossResult{std::move(tt), sweeper.skeleton(), 1, true, false, {},
                       {oracle.distinct_count()}};
  }

  const auto probe = validation_indices(oracle.dims(), cfg.seed, cfg.validation_size);
  std::optional<CrossResult> best;
  double best_change = std::numeric_limits<double>::infinity();
  Eigen::VectorXd previous;
  CrossSkeleton previous_skeleton;
  std::vector<double> changes;
  std::vector<std::size_t> distinct;

  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    for (std::size_t k = 1; k < n; ++k) sweeper.update_cut(k);
    for (std::size_t k = n - 1; k >= 1; --k) sweeper.update_cut(k);
    RealTensorTrain tt = sweeper.consolidate();
    distinct.push_back(oracle.distinct_count());
    Eigen::VectorXd values = evaluate(tt, probe);

    bool done = false;
    double change = std::numeric_limits<double>::infinity();
    if (sweep > 1) {
      const double scale = std::max(values.norm(), std::numeric_limits<double>::min());
      change = (values - previous).norm() / scale;
      changes.push_back(change);
      done = change < cfg.local_tol || sweeper.skeleton() == previous_skeleton;
    }
    CrossResult current{std::move(tt), sweeper.skeleton(), sweep, done, sweeper.degenerate(),
                        changes, distinct};
    if (done) return current;
    if (sweep == 1 || change < best_change) {
      best_change = sweep == 1 ? best_change : change;
      best = std::move(current);
    }
    previous = std::move(values);
    previous_skeleton = sweeper.skeleton();
  }
  best->converged = false;
  best->sweeps = cfg.max_sweeps;
  best->sweep_changes = changes;
  best->distinct_after_sweep = distinct;
  best->degenerate_pivots = sweeper.degenerate();
  return std::move(*best);
}

}  // namespace ttqst
