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

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ttqst/tensor_train.hpp"

namespace ttqst {

/// Lazily evaluated tensor elements with a memo and a query log.
///
/// Every distinct index is sent to the source exactly once; later queries
/// return the cached value, so a noisy source behaves deterministically for
/// the lifetime of the oracle. Not safe for concurrent use.
class ElementOracle {
 public:
  using Source = std::function<double(std::span<const std::uint8_t>)>;

  ElementOracle(std::vector<Index> dims, Source source);

  double operator()(std::span<const std::uint8_t> idx);

  const std::vector<Index>& dims() const noexcept { return dims_; }
  std::size_t sites() const noexcept { return dims_.size(); }

  /// Total number of calls, cached or not.
  std::size_t query_count() const noexcept { return query_count_; }
  /// Number of distinct indices evaluated (|query_log|).
  std::size_t distinct_count() const noexcept { return log_.size(); }
  /// Distinct indices in first-query order.
  const std::vector<MultiIndex>& query_log() const noexcept { return log_; }

  std::optional<double> cached(std::span<const std::uint8_t> idx) const;

 private:
  static std::string key(std::span<const std::uint8_t> idx);

  std::vector<Index> dims_;
  Source source_;
  std::unordered_map<std::string, double> cache_;
  std::vector<MultiIndex> log_;
  std::size_t query_count_ = 0;
};

/// Number of distinct full indices the oracle has evaluated.
inline std::size_t queried_basis_count(const ElementOracle& oracle) {
  return oracle.distinct_count();
}

/// Exact element oracle backed by a tensor train.
ElementOracle tensor_train_oracle(const RealTensorTrain& tt);

}  // namespace ttqst
