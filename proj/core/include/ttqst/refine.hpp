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
#include <span>
#include <vector>

#include "ttqst/measure.hpp"
#include "ttqst/pauli.hpp"
#include "ttqst/tensor_train.hpp"

namespace ttqst {

struct TrainConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_adam = 1e-8;
  Index batch_size = 256;
  /// Upper bound on epochs; training also stops after `patience` epochs
  /// without a new best loss.
  int epochs = 500;
  int patience = 10;
  std::uint64_t seed = 0;
  /// Rescale after every epoch so that A(0...0) = 2^-N (unit trace).
  bool freeze_identity = true;

  void validate() const;
};

/// Pauli strings with measured <sigma>, closed under replacing any subset of
/// factors by the identity.
struct TrainingSet {
  std::vector<PauliString> strings;
  std::vector<double> expectations;
  /// True for strings that were queried directly, false for closure members.
  std::vector<bool> logged;

  std::size_t size() const noexcept { return strings.size(); }
};

/// All zero-replacement descendants of the logged strings. Shots mode reads
/// descendants off the outcome histograms of their ancestors (averaging when
/// several ancestors share a descendant); the other modes query the channel,
/// whose noise is frozen per string. The identity is recorded as exactly 1.
TrainingSet build_closure(MeasurementChannel& channel, std::span<const PauliString> logged);
TrainingSet build_closure(const NoisyOracle& oracle);

struct Gradient {
  std::vector<Core<double>> cores;
  /// Loss over the samples the gradient was taken on.
  double loss = 0.0;
};

/// Gradient of sum_i (<sigma_i>_recon - v_i)^2 over the selected samples with
/// respect to every core entry, from left and right environments.
Gradient gradient_L(const RealTensorTrain& recon, const TrainingSet& data,
                    std::span<const std::size_t> batch);
/// Gradient over the whole set.
Gradient gradient_L(const RealTensorTrain& recon, const TrainingSet& data);

struct TrainResult {
  /// Iterate with the lowest full loss seen (including the initial one).
  RealTensorTrain tt;
  /// Full loss before training, then after every epoch.
  std::vector<double> loss_history;
  int epochs_run = 0;
  /// Loss exceeded ten times its initial value; training was aborted.
  bool diverged = false;
};

/// Adam on loss_L with shuffled mini-batches drawn without replacement.
TrainResult train(const RealTensorTrain& recon, const TrainingSet& data, const TrainConfig& cfg);

/// Rescales the train so that A(0...0) = 2^-N.
RealTensorTrain normalize_trace(const RealTensorTrain& tt);

}  // namespace ttqst
