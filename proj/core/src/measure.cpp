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

#include "ttqst/measure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "ttqst/error.hpp"
#include "ttqst/random.hpp"

namespace ttqst {

std::string_view to_string(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::exact: return "exact";
    case NoiseMode::gaussian: return "gaussian";
    case NoiseMode::shots: return "shots";
  }
  return "exact";
}

NoiseMode parse_noise_mode(std::string_view text) {
  if (text == "exact") return NoiseMode::exact;
  if (text == "gaussian") return NoiseMode::gaussian;
  if (text == "shots") return NoiseMode::shots;
  throw ConfigError(fmt::format("unknown noise mode '{}'", text));
}

void NoiseModel::validate() const {
  if (mode == NoiseMode::gaussian && !(epsilon > 0)) {
    throw ConfigError("gaussian noise needs epsilon > 0");
  }
  if (mode == NoiseMode::shots && shots < 1) throw ConfigError("shots mode needs shots >= 1");
}

double exact_expectation(const RealTensorTrain& state, const PauliString& p) {
  if (p.size() != state.size()) {
    throw DimensionError(
        fmt::format("Pauli string has {} qubits, state has {}", p.size(), state.size()));
  }
  return std::ldexp(element(state, p.span()), static_cast<int>(state.size()));
}

std::int64_t required_copies(int qubits, double purity, double epsilon) {
  if (!(epsilon > 0)) throw ConfigError("epsilon must be positive");
  if (!(purity > 0)) throw ConfigError("purity must be positive");
  const double m = std::ldexp(1.0, qubits) / (epsilon * epsilon * purity);
  // Absorb representation error in epsilon^2 and the purity contraction.
  return static_cast<std::int64_t>(std::ceil(m * (1.0 - 1e-9)));
}

std::int64_t required_copies(const RealTensorTrain& state, double epsilon) {
  return required_copies(static_cast<int>(state.size()), ttqst::purity(state), epsilon);
}

namespace {

// In-place unnormalized Walsh-Hadamard transform.
void walsh_hadamard(std::vector<double>& v) {
  for (std::size_t h = 1; h < v.size(); h <<= 1) {
    for (std::size_t i = 0; i < v.size(); i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = v[j], b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

std::vector<std::size_t> support(const PauliString& p) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] != 0) s.push_back(i);
  }
  return s;
}

// Mask of the support qubits of p that remain non-identity in q, or nullopt
// when q is not a descendant of p.
std::optional<std::size_t> descendant_mask(const PauliString& p, const PauliString& q) {
  if (p.size() != q.size()) return std::nullopt;
  const auto sup = support(p);
  const std::size_t k = sup.size();
  std::size_t mask = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[i] != 0 && q[i] != p[i]) return std::nullopt;
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (q[sup[j]] != 0) mask |= std::size_t{1} << (k - 1 - j);
  }
  return mask;
}

constexpr std::uint64_t kShotStream = 0x2545f4914f6cdd1dULL;

}  // namespace

MeasurementChannel::MeasurementChannel(RealTensorTrain state, NoiseModel noise)
    : state_(std::move(state)), noise_(noise) {
  noise_.validate();
  for (Index d : state_.dims()) {
    if (d != 4) throw DimensionError("measurement needs a Pauli-coefficient train (d = 4)");
  }
  purity_ = ttqst::purity(state_);
  delta_ = noise_.epsilon * std::sqrt(purity_ / std::ldexp(1.0, qubits()));
}

double MeasurementChannel::noise_level() const noexcept {
  switch (noise_.mode) {
    case NoiseMode::exact: return 0.0;
    case NoiseMode::gaussian: return delta_;
    case NoiseMode::shots: return 1.0 / std::sqrt(static_cast<double>(noise_.shots));
  }
  return 0.0;
}

double MeasurementChannel::expectation(const PauliString& p) {
  if (p.is_identity() && noise_.mode != NoiseMode::exact) {
    if (p.size() != state_.size()) throw DimensionError("Pauli string size mismatch");
    return 1.0;
  }
  switch (noise_.mode) {
    case NoiseMode::exact:
      return exact_expectation(state_, p);
    case NoiseMode::gaussian:
      return exact_expectation(state_, p) + delta_ * keyed_normal(hash_index(noise_.seed, p));
    case NoiseMode::shots:
      return marginal(p, p);
  }
  return 0.0;
}

std::vector<std::int64_t> MeasurementChannel::sample(const PauliString& p) const {
  const auto sup = support(p);
  const std::size_t k = sup.size();
  const std::size_t outcomes = std::size_t{1} << k;

  // Exact <P_T> for every kept subset T, then p(b) by the Walsh transform.
  std::vector<double> prob(outcomes);
  MultiIndex q(p.size(), 0);
  for (std::size_t mask = 0; mask < outcomes; ++mask) {
    for (std::size_t j = 0; j < k; ++j) {
      q[sup[j]] = (mask >> (k - 1 - j)) & 1U ? p[sup[j]] : 0;
    }
    prob[mask] = mask == 0 ? 1.0 : exact_expectation(state_, PauliString(q));
  }
  walsh_hadamard(prob);
  double total = 0.0;
  for (auto& v : prob) {
    v = std::max(v / static_cast<double>(outcomes), 0.0);
    total += v;
  }

  std::mt19937_64 rng(hash_index(noise_.seed ^ kShotStream, p));
  std::vector<std::int64_t> counts(outcomes, 0);
  std::int64_t left = noise_.shots;
  double mass = total;
  for (std::size_t c = 0; c < outcomes && left > 0; ++c) {
    if (c + 1 == outcomes || prob[c] >= mass) {
      counts[c] = left;
      break;
    }
    const double share = std::clamp(prob[c] / mass, 0.0, 1.0);
    std::binomial_distribution<std::int64_t> draw(left, share);
    counts[c] = draw(rng);
    left -= counts[c];
    mass -= prob[c];
  }
  return counts;
}

const std::vector<std::int64_t>& MeasurementChannel::counts(const PauliString& p) {
  if (noise_.mode != NoiseMode::shots) throw Error("shot counts exist only in shots mode");
  if (p.size() != state_.size()) throw DimensionError("Pauli string size mismatch");
  auto it = counts_.find(p);
  if (it == counts_.end()) it = counts_.emplace(p, sample(p)).first;
  return it->second;
}

std::vector<double> MeasurementChannel::marginals(const PauliString& p) {
  const auto& c = counts(p);
  std::vector<double> v(c.begin(), c.end());
  walsh_hadamard(v);
  for (auto& x : v) x /= static_cast<double>(noise_.shots);
  return v;
}

double MeasurementChannel::marginal(const PauliString& p, const PauliString& q) {
  const auto mask = descendant_mask(p, q);
  if (!mask) {
    throw DimensionError(fmt::format("{} is not a marginal of {}", q.to_string(), p.to_string()));
  }
  const auto& c = counts(p);
  double sum = 0.0;
  for (std::size_t b = 0; b < c.size(); ++b) {
    const bool odd = std::popcount(b & *mask) & 1;
    sum += odd ? -static_cast<double>(c[b]) : static_cast<double>(c[b]);
  }
  return sum / static_cast<double>(noise_.shots);
}

namespace {

ElementOracle::Source channel_source(const std::shared_ptr<MeasurementChannel>& channel) {
  return [channel](std::span<const std::uint8_t> idx) {
    const PauliString p(MultiIndex(idx.begin(), idx.end()));
    return std::ldexp(channel->expectation(p), -channel->qubits());
  };
}

}  // namespace

NoisyOracle::NoisyOracle(std::shared_ptr<MeasurementChannel> channel)
    : ElementOracle(channel->state().dims(), channel_source(channel)),
      channel_(std::move(channel)) {}

NoisyOracle::NoisyOracle(const RealTensorTrain& state, const NoiseModel& noise)
    : NoisyOracle(std::make_shared<MeasurementChannel>(state, noise)) {}

MeasurementLedger NoisyOracle::ledger() const {
  MeasurementLedger l;
  l.distinct_strings = distinct_count();
  l.total_queries = query_count();
  const auto nb = static_cast<std::int64_t>(l.distinct_strings);
  const auto& noise = channel_->noise();
  if (noise.mode == NoiseMode::shots) {
    l.implied_copies = nb * noise.shots;
  } else if (noise.mode == NoiseMode::gaussian) {
    l.implied_copies =
        nb * required_copies(channel_->qubits(), channel_->purity(), noise.epsilon);
  }
  return l;
}

NoisyOracle noisy_oracle(const RealTensorTrain& state, const NoiseModel& noise) {
  return NoisyOracle(state, noise);
}

std::size_t measurement_setting_count(const std::vector<MultiIndex>& strings) {
  std::vector<const MultiIndex*> order;
  for (const auto& s : strings) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(), [](const MultiIndex* a, const MultiIndex* b) {
    auto w = [](const MultiIndex* m) { return std::count_if(m->begin(), m->end(), [](auto g) { return g != 0; }); };
    return w(a) > w(b);
  });
  // Partial settings; 0 marks a still-free qubit.
  std::vector<MultiIndex> settings;
  for (const MultiIndex* s : order) {
    bool placed = false;
    for (auto& setting : settings) {
      bool fits = true;
      for (std::size_t i = 0; i < s->size() && fits; ++i) {
        fits = (*s)[i] == 0 || setting[i] == 0 || setting[i] == (*s)[i];
      }
      if (fits) {
        for (std::size_t i = 0; i < s->size(); ++i) {
          if ((*s)[i] != 0) setting[i] = (*s)[i];
        }
        placed = true;
        break;
      }
    }
    if (!placed) settings.push_back(*s);
  }
  return settings.size();
}

void write_ledger_header(std::ostream& out) {
  out << "run_id,N,mode,eps_or_M,Nb,implied_copies\n";
}

void write_ledger_row(std::ostream& out, const std::string& run_id, int qubits,
                      const NoiseModel& noise, const MeasurementLedger& ledger) {
  std::string param;
  if (noise.mode == NoiseMode::gaussian) param = fmt::format("{}", noise.epsilon);
  if (noise.mode == NoiseMode::shots) param = fmt::format("{}", noise.shots);
  out << fmt::format("{},{},{},{},{},{}\n", run_id, qubits, to_string(noise.mode), param,
                     ledger.distinct_strings, ledger.implied_copies);
}

MeasurementRecord make_record(const NoisyOracle& oracle) {
  MeasurementRecord r;
  auto& channel = oracle.channel();
  r.qubits = channel.qubits();
  r.noise = channel.noise();
  for (const auto& idx : oracle.query_log()) {
    PauliString p(idx);
    r.expectations.push_back(std::ldexp(*oracle.cached(idx), r.qubits));
    if (r.noise.mode == NoiseMode::shots) {
      r.counts.push_back(p.is_identity() ? std::vector<std::int64_t>{r.noise.shots}
                                         : channel.counts(p));
    }
    r.strings.push_back(std::move(p));
  }
  return r;
}

void write_record(std::ostream& out, const MeasurementRecord& r) {
  out << "# ttqst measurement record v1\n";
  out << "qubits " << r.qubits << '\n';
  out << "mode " << to_string(r.noise.mode) << '\n';
  out << "epsilon " << fmt::format("{}", r.noise.epsilon) << '\n';
  out << "shots " << r.noise.shots << '\n';
  out << "seed " << r.noise.seed << '\n';
  out << "strings " << r.strings.size() << '\n';
  for (std::size_t i = 0; i < r.strings.size(); ++i) {
    out << r.strings[i].to_string() << ' ' << fmt::format("{}", r.expectations[i]);
    if (i < r.counts.size()) {
      for (auto c : r.counts[i]) out << ' ' << c;
    }
    out << '\n';
  }
}

MeasurementRecord read_record(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ttqst measurement record v1", 0) != 0) {
    throw Error("missing measurement record header");
  }
  MeasurementRecord r;
  std::size_t count = 0;
  auto field = [&](std::string_view key) {
    if (!std::getline(in, line)) throw Error(fmt::format("record ends before '{}'", key));
    std::istringstream ls(line);
    std::string k, v;
    ls >> k >> v;
    if (k != key) throw Error(fmt::format("expected '{}' in record, found '{}'", key, k));
    return v;
  };
  try {
    r.qubits = std::stoi(field("qubits"));
    r.noise.mode = parse_noise_mode(field("mode"));
    r.noise.epsilon = std::stod(field("epsilon"));
    r.noise.shots = std::stoll(field("shots"));
    r.noise.seed = std::stoull(field("seed"));
    count = std::stoull(field("strings"));
  } catch (const std::logic_error& e) {
    throw Error(fmt::format("malformed measurement record: {}", e.what()));
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw Error("measurement record is truncated");
    std::istringstream ls(line);
    std::string s;
    double v = 0.0;
    if (!(ls >> s >> v)) throw Error(fmt::format("malformed record line {}", i + 1));
    r.strings.push_back(PauliString(static_cast<std::size_t>(r.qubits), PauliString::parse(s).gammas()));
    r.expectations.push_back(v);
    if (r.noise.mode == NoiseMode::shots) {
      std::vector<std::int64_t> c;
      std::int64_t x = 0;
      while (ls >> x) c.push_back(x);
      const std::size_t expected = std::size_t{1} << r.strings.back().weight();
      if (c.size() != expected) {
        throw Error(fmt::format("record line {} has {} counts, expected {}", i + 1, c.size(),
                                expected));
      }
      r.counts.push_back(std::move(c));
    }
  }
  return r;
}

}  // namespace ttqst
