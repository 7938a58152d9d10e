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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ttqst/oracle.hpp"
#include "ttqst/pauli.hpp"
#include "ttqst/tensor_train.hpp"

namespace ttqst {

enum class NoiseMode { exact, gaussian, shots };

std::string_view to_string(NoiseMode mode);
NoiseMode parse_noise_mode(std::string_view text);

struct NoiseModel {
  NoiseMode mode = NoiseMode::exact;
  /// Relative error (gaussian mode).
  double epsilon = 0.01;
  /// Copies per measured basis (shots mode).
  std::int64_t shots = 1000000;
  std::uint64_t seed = 0;

  void validate() const;
};

/// <sigma^p> = 2^N A(p).
double exact_expectation(const RealTensorTrain& state, const PauliString& p);

/// ceil(2^N / (epsilon^2 purity)).
std::int64_t required_copies(const RealTensorTrain& state, double epsilon);
/// Same, with the purity supplied directly.
std::int64_t required_copies(int qubits, double purity, double epsilon);

struct MeasurementLedger {
  /// Distinct Pauli strings queried (N_b).
  std::size_t distinct_strings = 0;
  std::size_t total_queries = 0;
  /// N_b * M in shots mode, N_b * ceil(1/delta^2) in gaussian mode, 0 when exact.
  std::int64_t implied_copies = 0;
};

/// Simulated measurement apparatus for one state and one noise model.
///
/// Noise is a function of (seed, string) only: gaussian noise comes from a
/// counter-based normal deviate and shot outcomes from a generator seeded by
/// the same hash, so values do not depend on query order.
///
/// Shots mode measures each string in its own local basis: the k qubits
/// where the string is not the identity are measured M times, and the
/// histogram of the 2^k joint outcomes is kept. Outcome code bit j (from the
/// most significant) is set when the j-th measured qubit gave -1.
class MeasurementChannel {
 public:
  MeasurementChannel(RealTensorTrain state, NoiseModel noise);

  const RealTensorTrain& state() const noexcept { return state_; }
  const NoiseModel& noise() const noexcept { return noise_; }
  int qubits() const noexcept { return static_cast<int>(state_.size()); }
  double purity() const noexcept { return purity_; }
  /// Gaussian standard deviation of <sigma>: epsilon sqrt(purity / 2^N).
  double delta() const noexcept { return delta_; }
  /// Standard deviation scale of a measured <sigma>: delta in gaussian mode,
  /// 1/sqrt(M) in shots mode, 0 when exact.
  double noise_level() const noexcept;

  /// Measured <sigma^p>. Under noise the identity string returns exactly 1.
  double expectation(const PauliString& p);

  /// Outcome histogram of the basis p (shots mode); sampled on first use.
  const std::vector<std::int64_t>& counts(const PauliString& p);

  /// Estimate of <sigma^q> from the outcomes recorded in basis p, where q is
  /// p with some factors replaced by the identity.
  double marginal(const PauliString& p, const PauliString& q);

  /// Estimates for all 2^k descendants of p from its outcome histogram,
  /// indexed by the subset of kept support qubits (bit j set = j-th support
  /// qubit kept, most significant first).
  std::vector<double> marginals(const PauliString& p);

 private:
  std::vector<std::int64_t> sample(const PauliString& p) const;

  RealTensorTrain state_;
  NoiseModel noise_;
  double purity_ = 1.0;
  double delta_ = 0.0;
  std::unordered_map<PauliString, std::vector<std::int64_t>, PauliStringHash> counts_;
};

/// Element oracle A(g) + noise / 2^N backed by a MeasurementChannel.
class NoisyOracle : public ElementOracle {
 public:
  NoisyOracle(const RealTensorTrain& state, const NoiseModel& noise);
  explicit NoisyOracle(std::shared_ptr<MeasurementChannel> channel);

  MeasurementChannel& channel() const noexcept { return *channel_; }
  std::shared_ptr<MeasurementChannel> shared_channel() const noexcept { return channel_; }
  MeasurementLedger ledger() const;

 private:
  std::shared_ptr<MeasurementChannel> channel_;
};

NoisyOracle noisy_oracle(const RealTensorTrain& state, const NoiseModel& noise);

/// Minimal-ish number of full local settings (one Pauli axis per qubit)
/// whose marginals cover every string, by greedy first fit.
std::size_t measurement_setting_count(const std::vector<MultiIndex>& strings);

/// Ledger export. write_ledger_header emits
///   run_id,N,mode,eps_or_M,Nb,implied_copies
void write_ledger_header(std::ostream& out);
void write_ledger_row(std::ostream& out, const std::string& run_id, int qubits,
                      const NoiseModel& noise, const MeasurementLedger& ledger);

/// Logged strings with their measured values, plus shot histograms.
struct MeasurementRecord {
  int qubits = 0;
  NoiseModel noise;
  std::vector<PauliString> strings;
  /// Measured <sigma>, aligned with strings.
  std::vector<double> expectations;
  /// Shots mode only; aligned with strings.
  std::vector<std::vector<std::int64_t>> counts;
};

MeasurementRecord make_record(const NoisyOracle& oracle);

/// Text form: a "# ttqst measurement record v1" header, key/value lines
/// (qubits, mode, epsilon, shots, seed, strings), then one line per string:
///   <IXYZ string> <expectation> [<count> ...]
void write_record(std::ostream& out, const MeasurementRecord& record);
MeasurementRecord read_record(std::istream& in);

}  // namespace ttqst
