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
#include <string>

#include "json.hpp"

#include "ttqst/measure.hpp"
#include "ttqst/refine.hpp"
#include "ttqst/ttcross.hpp"

namespace ttqst::cli {

enum class StateKind { lptn, thermal };

std::string_view to_string(StateKind kind);
StateKind parse_state_kind(std::string_view text);

struct StateConfig {
  StateKind kind = StateKind::lptn;
  int N = 8;
  Index kappa = 4;
  Index K = 10;
  std::uint64_t seed = 0;
  double g = 1.0;
  double T = 2.0;
  /// TT-SVD cutoff for thermal states.
  double tt_tol = 1e-12;

  void validate() const;
};

struct RunConfig {
  StateConfig state;
  NoiseModel noise;
  CrossConfig cross;
  /// Use the channel's noise level as pinv_cutoff for noisy oracles.
  bool auto_pinv_cutoff = true;
  TrainConfig train;
  std::filesystem::path out_dir = ".";
  /// Inputs. Relative paths are resolved against out_dir.
  std::filesystem::path state_file = "state.tt";
  std::filesystem::path recon_file;
  std::filesystem::path record_file;
  std::uint64_t seed = 0;
  int repetitions = 80;
  /// Qubit range for sweeps (inclusive).
  int n_min = 4;
  int n_max = 12;

  RunConfig();
  void validate() const;
  std::filesystem::path resolve(const std::filesystem::path& p) const;
  /// Cross settings for a given channel (applies auto_pinv_cutoff).
  CrossConfig cross_for(const MeasurementChannel& channel, std::uint64_t seed) const;
};

nlohmann::json to_json(const RunConfig& cfg);
/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const RunConfig& cfg);

}  // namespace ttqst::cli
