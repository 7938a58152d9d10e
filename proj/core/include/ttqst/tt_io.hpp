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
#include <filesystem>
#include <iosfwd>
#include <variant>

#include "ttqst/tensor_train.hpp"

namespace ttqst {

/// Binary tensor-train container, all integers and floats little-endian:
///
///   u8      version (= 1)
///   char[4] magic "TTQS"
///   u8      kind (0 = real f64, 1 = complex f64 pairs re,im)
///   u32     N
///   N x (u32 left, u32 phys, u32 right)
///   core entries, site by site, each core row-major in (left, phys, right)
inline constexpr std::uint8_t kTensorTrainFormatVersion = 1;

using AnyTensorTrain = std::variant<RealTensorTrain, ComplexTensorTrain>;

void write_tensor_train(std::ostream& out, const RealTensorTrain& tt);
void write_tensor_train(std::ostream& out, const ComplexTensorTrain& tt);
AnyTensorTrain read_tensor_train(std::istream& in);

void save_tensor_train(const std::filesystem::path& path, const RealTensorTrain& tt);
/// Loads a real train; a complex file is accepted only if its imaginary parts vanish.
RealTensorTrain load_real_tensor_train(const std::filesystem::path& path);

}  // namespace ttqst
