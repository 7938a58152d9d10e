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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ttqst/cli/config.hpp"
#include "ttqst/measure.hpp"
#include "ttqst/metrics.hpp"
#include "ttqst/refine.hpp"
#include "ttqst/tensor_train.hpp"
#include "ttqst/ttcross.hpp"

namespace ttqst::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kNumerical = 3,
  kNotConverged = 4,
};

/// A generated target state with the facts recorded in its sidecar.
struct StateArtifact {
  RealTensorTrain tt;
  StateConfig spec;
  double purity = 0.0;
  std::vector<Index> bonds;
  /// kappa^2 for LPTN states, the largest compressed bond for thermal ones.
  Index chi_target = 0;
  /// Built on first use by target_fidelity().
  mutable std::shared_ptr<const FidelityReference> fidelity_cache;
};

/// Fidelity against this state as rho1; requires N <= kMaxFidelityQubits.
const FidelityReference& target_fidelity(const StateArtifact& state);

StateArtifact make_state(const StateConfig& spec);
/// Writes the TT container and "<path>.json" metadata.
void write_state(const std::filesystem::path& path, const StateArtifact& state);
StateArtifact read_state(const std::filesystem::path& path);

/// One CSV row. Optional fields are written empty, with the reason in flags.
struct RunRecord {
  std::string run_id;
  int N = 0;
  std::string kind;
  Index chi_target = 0;
  std::string noise_mode;
  std::optional<double> eps;
  std::optional<std::int64_t> M;
  std::size_t Nb = 0;
  double D = 0.0;
  std::optional<double> Ds;
  std::optional<double> F;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> flags;
  bool converged = true;
};

/// run_id,N,kind,chi_target,noise_mode,eps,M,Nb,D,Ds,F,wall_ms,seed,flags
void write_run_header(std::ostream& out);
void write_run_row(std::ostream& out, const RunRecord& r);

/// What a reconstruction leaves behind besides its CSV row.
struct Reconstruction {
  CrossResult cross;
  MeasurementRecord record;
};

/// One noisy reconstruction of a state. Artifacts are written when
/// `artifacts` is true: <run_id>.recon.tt, .skeleton.txt and .record.txt.
/// The train and measurement record are also stored in `keep` if given.
RunRecord reconstruct_once(const StateArtifact& state, const RunConfig& cfg, int repetition,
                           bool artifacts, std::optional<Reconstruction>* keep = nullptr);

struct RefineRecord {
  RunRecord base;
  double D_before = 0.0;
  double D_after = 0.0;
  std::optional<double> F_before;
  std::optional<double> F_after;
  int epochs = 0;
  bool diverged = false;
};

/// Rebuilds the measurement channel from the record, trains on the closure
/// of its strings and scores the result before and after. Throws ConfigError
/// when the record does not belong to the state. `trained` receives the
/// training output if given.
RefineRecord refine_once(const StateArtifact& state, const RealTensorTrain& recon,
                         const MeasurementRecord& record, const RunConfig& cfg,
                         std::optional<TrainResult>* trained = nullptr);

void write_refine_header(std::ostream& out);
void write_refine_row(std::ostream& out, const RefineRecord& r);

/// Sweep summary: N,runs,failures,mean_D,mean_Ds,mean_Nb,three_pow_N
void write_sweep_header(std::ostream& out);

int cmd_generate(const RunConfig& cfg);
int cmd_reconstruct(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);
int cmd_refine(const RunConfig& cfg);
/// Compares two Pauli-coefficient trains (plus a record for D_s) and prints
/// a JSON report to `out`.
int cmd_metrics(const std::filesystem::path& reference, const std::filesystem::path& other,
                const std::optional<std::filesystem::path>& record, std::ostream& out);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace ttqst::cli
