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

#include "ttqst/refine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include <fmt/format.h>

#include "ttqst/error.hpp"
#include "ttqst/metrics.hpp"

namespace ttqst {

void TrainConfig::validate() const {
  if (!(learning_rate > 0)) throw ConfigError("learning_rate must be positive");
  if (!(beta1 > 0 && beta1 < 1)) throw ConfigError("beta1 must lie in (0, 1)");
  if (!(beta2 > 0 && beta2 < 1)) throw ConfigError("beta2 must lie in (0, 1)");
  if (!(eps_adam > 0)) throw ConfigError("eps_adam must be positive");
  if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (epochs < 0) throw ConfigError("epochs must be nonnegative");
  if (patience < 1) throw ConfigError("patience must be at least 1");
}

TrainingSet build_closure(MeasurementChannel& channel, std::span<const PauliString> logged) {
  struct Acc {
    double sum = 0.0;
    int count = 0;
    bool logged = false;
  };
  const bool shots = channel.noise().mode == NoiseMode::shots;
  std::unordered_map<PauliString, std::size_t, PauliStringHash> slot;
  std::vector<PauliString> order;
  std::vector<Acc> acc;
  auto add = [&](const PauliString& q, double v, bool direct) {
    auto [it, fresh] = slot.emplace(q, order.size());
    if (fresh) {
      order.push_back(q);
      acc.emplace_back();
    } else if (!shots) {
      acc[it->second].logged = acc[it->second].logged || direct;
      return;
    }
    auto& a = acc[it->second];
    a.sum += v;
    a.count += 1;
    a.logged = a.logged || direct;
  };

  std::unordered_map<PauliString, bool, PauliStringHash> seen;
  for (const auto& p : logged) {
    if (!seen.emplace(p, true).second) continue;
    std::vector<std::size_t> sup;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] != 0) sup.push_back(i);
    }
    const std::size_t k = sup.size();
    std::vector<double> m;
    if (shots && k > 0) m = channel.marginals(p);
    MultiIndex q(p.size(), 0);
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      for (std::size_t j = 0; j < k; ++j) q[sup[j]] = (mask >> (k - 1 - j)) & 1U ? p[sup[j]] : 0;
      PauliString ps(q);
      const bool direct = mask + 1 == (std::size_t{1} << k);
      if (mask == 0) {
        add(ps, 1.0, direct);
      } else {
        add(ps, shots ? m[mask] : channel.expectation(ps), direct);
      }
    }
  }

  TrainingSet set;
  set.strings = std::move(order);
  set.expectations.reserve(acc.size());
  for (const auto& a : acc) {
    set.expectations.push_back(a.sum / a.count);
    set.logged.push_back(a.logged);
  }
  // The identity is known exactly whatever its ancestors recorded.
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set.strings[i].is_identity()) set.expectations[i] = 1.0;
  }
  return set;
}

TrainingSet build_closure(const NoisyOracle& oracle) {
  std::vector<PauliString> logged;
  logged.reserve(oracle.query_log().size());
  for (const auto& idx : oracle.query_log()) logged.emplace_back(idx);
  return build_closure(oracle.channel(), logged);
}

Gradient gradient_L(const RealTensorTrain& recon, const TrainingSet& data,
                    std::span<const std::size_t> batch) {
  const std::size_t n = recon.size();
  const double scale = std::ldexp(1.0, static_cast<int>(n));
  Gradient g;
  g.cores.reserve(n);
  for (const auto& c : recon.cores()) g.cores.emplace_back(c.left_dim(), c.phys_dim(), c.right_dim());

  std::vector<Eigen::RowVectorXd> left(n + 1);
  std::vector<Eigen::VectorXd> right(n + 1);
  left[0] = Eigen::RowVectorXd::Ones(1);
  right[n] = Eigen::VectorXd::Ones(1);
  for (std::size_t i : batch) {
    const auto& s = data.strings.at(i);
    if (s.size() != n) throw DimensionError("training string size does not match the train");
    for (std::size_t p = 0; p < n; ++p) left[p + 1] = left[p] * recon.core(p).slice(s[p]);
    for (std::size_t p = n; p-- > 0;) right[p] = recon.core(p).slice(s[p]) * right[p + 1];
    const double r = scale * left[n](0) - data.expectations[i];
    g.loss += r * r;
    const double c = 2.0 * r * scale;
    for (std::size_t p = 0; p < n; ++p) {
      g.cores[p].slice(s[p]).noalias() += c * left[p].transpose() * right[p + 1].transpose();
    }
  }
  return g;
}

Gradient gradient_L(const RealTensorTrain& recon, const TrainingSet& data) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return gradient_L(recon, data, all);
}

RealTensorTrain normalize_trace(const RealTensorTrain& tt) {
  const MultiIndex zero(tt.size(), 0);
  const double a0 = element(tt, std::span<const std::uint8_t>(zero));
  if (a0 == 0.0 || !std::isfinite(a0)) {
    throw NumericalError("cannot normalize a train with zero identity coefficient");
  }
  const double target = std::ldexp(1.0, -static_cast<int>(tt.size()));
  const double alpha = target / a0;
  // Spread the factor over all cores so no single core absorbs the scale.
  const double share = std::pow(std::abs(alpha), 1.0 / static_cast<double>(tt.size()));
  auto cores = tt.cores();
  for (std::size_t p = 0; p < cores.size(); ++p) {
    const double f = (p == 0 && alpha < 0) ? -share : share;
    for (double& v : cores[p].data()) v *= f;
  }
  return RealTensorTrain(std::move(cores));
}

namespace {

double full_loss(const RealTensorTrain& tt, const TrainingSet& data) {
  return loss_L(data.strings, data.expectations, tt);
}

}  // namespace

TrainResult train(const RealTensorTrain& recon, const TrainingSet& data, const TrainConfig& cfg) {
  cfg.validate();
  if (data.size() == 0) throw Error("training set is empty");
  TrainResult out{recon, {}, 0, false};
  const double initial = full_loss(recon, data);
  out.loss_history.push_back(initial);
  double norm2 = 0.0;
  for (double v : data.expectations) norm2 += v * v;
  // Nothing to fit: the train already reproduces the data to rounding.
  if (cfg.epochs == 0 || initial <= 1e-24 * norm2) return out;

  auto cores = recon.cores();
  std::vector<std::vector<double>> m(cores.size()), v(cores.size());
  for (std::size_t p = 0; p < cores.size(); ++p) {
    m[p].assign(cores[p].size(), 0.0);
    v[p].assign(cores[p].size(), 0.0);
  }
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(cfg.seed);
  const auto batch = static_cast<std::size_t>(cfg.batch_size);
  double best = initial;
  int stale = 0;
  long step = 0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t stop = std::min(order.size(), start + batch);
      const RealTensorTrain current(cores);
      const Gradient g = gradient_L(
          current, data, std::span<const std::size_t>(order.data() + start, stop - start));
      ++step;
      const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      for (std::size_t p = 0; p < cores.size(); ++p) {
        auto w = cores[p].data();
        const auto gp = g.cores[p].data();
        for (std::size_t k = 0; k < w.size(); ++k) {
          m[p][k] = cfg.beta1 * m[p][k] + (1.0 - cfg.beta1) * gp[k];
          v[p][k] = cfg.beta2 * v[p][k] + (1.0 - cfg.beta2) * gp[k] * gp[k];
          w[k] -= cfg.learning_rate * (m[p][k] / c1) / (std::sqrt(v[p][k] / c2) + cfg.eps_adam);
        }
      }
    }
    RealTensorTrain current(cores);
    if (cfg.freeze_identity) {
      current = normalize_trace(current);
      cores = current.cores();
    }
    const double loss = full_loss(current, data);
    out.loss_history.push_back(loss);
    out.epochs_run = epoch;
    if (!std::isfinite(loss) || loss > 10.0 * initial) {
      out.diverged = true;
      break;
    }
    if (loss < best) {
      best = loss;
      out.tt = current;
      stale = 0;
    } else if (++stale >= cfg.patience) {
      break;
    }
  }
  return out;
}

}  // namespace ttqst
