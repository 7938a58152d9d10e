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

#include "ttqst/oracle.hpp"

#include <memory>

#include <fmt/format.h>

namespace ttqst {

ElementOracle::ElementOracle(std::vector<Index> dims, Source source)
    : dims_(std::move(dims)), source_(std::move(source)) {
  if (dims_.empty()) throw DimensionError("oracle needs at least one site");
  for (Index d : dims_) {
    if (d < 1 || d > 255) throw DimensionError("oracle dimensions must be in 1..255");
  }
  if (!source_) throw ConfigError("oracle source is empty");
}

std::string ElementOracle::key(std::span<const std::uint8_t> idx) {
  return std::string(reinterpret_cast<const char*>(idx.data()), idx.size());
}

double ElementOracle::operator()(std::span<const std::uint8_t> idx) {
  if (idx.size() != dims_.size()) {
    throw DimensionError(
        fmt::format("oracle query of length {} on {} sites", idx.size(), dims_.size()));
  }
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= dims_[i]) {
      throw DimensionError(fmt::format("oracle index {} out of range at site {}", int(idx[i]), i));
    }
  }
  ++query_count_;
  auto [it, inserted] = cache_.try_emplace(key(idx), 0.0);
  if (inserted) {
    try {
      it->second = source_(idx);
    } catch (...) {
      cache_.erase(it);
      throw;
    }
    log_.emplace_back(idx.begin(), idx.end());
  }
  return it->second;
}

std::optional<double> ElementOracle::cached(std::span<const std::uint8_t> idx) const {
  auto it = cache_.find(key(idx));
  if (it == cache_.end()) return std::nullopt;
  return it->second;
}

ElementOracle tensor_train_oracle(const RealTensorTrain& tt) {
  auto shared = std::make_shared<const RealTensorTrain>(tt);
  return ElementOracle(tt.dims(), [shared](std::span<const std::uint8_t> idx) {
    return element(*shared, idx);
  });
}

}  // namespace ttqst
