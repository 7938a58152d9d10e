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

#include "ttqst/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "json.hpp"
#include "ttqst/dense.hpp"
#include "ttqst/error.hpp"
#include "ttqst/metrics.hpp"
#include "ttqst/states.hpp"
#include "ttqst/tt_io.hpp"

namespace ttqst::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json state_json(const StateConfig& s) {
  RunConfig c;
  c.state = s;
  return to_json(c)["state"];
}

fs::path sidecar_path(const fs::path& p) { return fs::path(p.string() + ".json"); }

std::ofstream open_append(const fs::path& path, void (*header)(std::ostream&)) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error(fmt::format("cannot open {} for writing", path.string()));
  if (fresh) header(out);
  return out;
}

std::string opt(const std::optional<double>& v) {
  return v ? fmt::format("{}", *v) : std::string();
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) {
    if (!s.empty()) s += ';';
    s += p;
  }
  return s;
}

void ensure_dir(const fs::path& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void fill_noise_fields(RunRecord& r, const NoiseModel& noise) {
  r.noise_mode = std::string(to_string(noise.mode));
  if (noise.mode == NoiseMode::gaussian) {
    r.eps = noise.epsilon;
    r.flags.push_back("M=null:gaussian");
  } else if (noise.mode == NoiseMode::shots) {
    r.M = noise.shots;
    r.flags.push_back("eps=null:shots");
  } else {
    r.flags.push_back("eps=null:exact");
    r.flags.push_back("M=null:exact");
  }
}

}  // namespace

const FidelityReference& target_fidelity(const StateArtifact& state) {
  if (!state.fidelity_cache) {
    state.fidelity_cache = std::make_shared<const FidelityReference>(to_dense_operator(state.tt));
  }
  return *state.fidelity_cache;
}

StateArtifact make_state(const StateConfig& spec) {
  spec.validate();
  StateArtifact a{spec.kind == StateKind::lptn
                      ? lptn_state(LptnSpec{spec.N, spec.kappa, spec.K, spec.seed})
                      : thermal_ising(ThermalSpec{spec.N, spec.g, spec.T}, spec.tt_tol),
                  spec, 0.0, {}, 0, nullptr};
  a.purity = purity(a.tt);
  a.bonds = a.tt.bond_dims();
  a.chi_target = spec.kind == StateKind::lptn ? spec.kappa * spec.kappa : a.tt.max_bond();
  return a;
}

void write_state(const fs::path& path, const StateArtifact& state) {
  ensure_dir(path.parent_path());
  save_tensor_train(path, state.tt);
  json meta{{"spec", state_json(state.spec)},
            {"purity", state.purity},
            {"bond_profile", state.bonds},
            {"chi_target", state.chi_target}};
  std::ofstream out(sidecar_path(path));
  if (!out) throw Error(fmt::format("cannot write {}", sidecar_path(path).string()));
  out << meta.dump(2) << '\n';
}

StateArtifact read_state(const fs::path& path) {
  RealTensorTrain tt = load_real_tensor_train(path);
  std::ifstream in(sidecar_path(path));
  if (!in) throw ConfigError(fmt::format("missing state metadata {}", sidecar_path(path).string()));
  json meta;
  try {
    meta = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("state metadata is not valid JSON: {}", e.what()));
  }
  RunConfig c = config_from_json(json{{"state", meta.at("spec")}});
  StateArtifact a{std::move(tt), c.state, meta.value("purity", 0.0), {}, meta.value("chi_target", Index{0}), nullptr};
  a.bonds = a.tt.bond_dims();
  if (static_cast<int>(a.tt.size()) != a.spec.N) {
    throw ConfigError("state metadata does not match the stored train");
  }
  return a;
}

void write_run_header(std::ostream& out) {
  out << "run_id,N,kind,chi_target,noise_mode,eps,M,Nb,D,Ds,F,wall_ms,seed,flags\n";
}

void write_run_row(std::ostream& out, const RunRecord& r) {
  out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{:.3f},{},{}\n", r.run_id, r.N, r.kind,
                     r.chi_target, r.noise_mode, opt(r.eps),
                     r.M ? std::to_string(*r.M) : std::string(), r.Nb, r.D, opt(r.Ds), opt(r.F),
                     r.wall_ms, r.seed, join(r.flags));
}

RunRecord reconstruct_once(const StateArtifact& state, const RunConfig& cfg, int repetition,
                           bool artifacts, std::optional<Reconstruction>* keep) {
  const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(repetition);
  NoiseModel noise = cfg.noise;
  noise.seed = seed;
  auto channel = std::make_shared<MeasurementChannel>(state.tt, noise);
  NoisyOracle oracle(channel);
  const CrossConfig cross = cfg.cross_for(*channel, seed);

  const auto t0 = std::chrono::steady_clock::now();
  CrossResult res = ttcross_dmrg(oracle, cross);
  RunRecord r;
  r.wall_ms = elapsed_ms(t0);
  r.N = state.spec.N;
  r.kind = std::string(to_string(state.spec.kind));
  r.chi_target = state.chi_target;
  r.seed = seed;
  r.run_id = fmt::format("{}-N{}-{}-s{}", r.kind, r.N, to_string(noise.mode), seed);
  r.Nb = oracle.distinct_count();
  r.converged = res.converged;
  r.flags.push_back(res.converged ? "converged" : "not_converged");
  if (res.degenerate_pivots) r.flags.push_back("degenerate_pivots");
  fill_noise_fields(r, noise);
  r.D = distance_D(state.tt, res.tt);
  try {
    r.Ds = distance_Ds(oracle, res.tt);
  } catch (const NumericalError&) {
    r.flags.push_back("Ds=null:zero_denominator");
  }
  if (r.N <= kMaxFidelityQubits) {
    r.F = target_fidelity(state)(to_dense_operator(res.tt));
  } else {
    r.flags.push_back(fmt::format("F=null:N>{}", kMaxFidelityQubits));
  }

  if (artifacts) {
    ensure_dir(cfg.out_dir);
    save_tensor_train(cfg.resolve(r.run_id + ".recon.tt"), res.tt);
    {
      std::ofstream out(cfg.resolve(r.run_id + ".skeleton.txt"));
      write_skeleton(out, res.skeleton);
    }
    {
      std::ofstream out(cfg.resolve(r.run_id + ".record.txt"));
      write_record(out, make_record(oracle));
    }
    auto ledger = open_append(cfg.resolve("ledger.csv"), write_ledger_header);
    write_ledger_row(ledger, r.run_id, r.N, noise, oracle.ledger());
  }
  if (keep) keep->emplace(Reconstruction{std::move(res), make_record(oracle)});
  return r;
}

RefineRecord refine_once(const StateArtifact& state, const RealTensorTrain& recon,
                         const MeasurementRecord& record, const RunConfig& cfg,
                         std::optional<TrainResult>* trained) {
  if (record.qubits != state.spec.N || static_cast<int>(recon.size()) != state.spec.N) {
    throw ConfigError("state, reconstruction and record disagree on the number of qubits");
  }
  MeasurementChannel channel(state.tt, record.noise);
  for (std::size_t i = 0; i < record.strings.size(); ++i) {
    const double v = channel.expectation(record.strings[i]);
    if (std::abs(v - record.expectations[i]) > 1e-9 * std::max(1.0, std::abs(v))) {
      throw ConfigError(fmt::format("record value for {} does not match the state and noise model",
                                    record.strings[i].to_string()));
    }
  }
  const TrainingSet data = build_closure(channel, record.strings);
  TrainConfig tc = cfg.train;
  tc.seed = cfg.seed;

  const auto t0 = std::chrono::steady_clock::now();
  const RealTensorTrain start = balance(recon);
  const TrainResult result = train(start, data, tc);
  RefineRecord r;
  r.base.wall_ms = elapsed_ms(t0);
  r.base.N = state.spec.N;
  r.base.kind = std::string(to_string(state.spec.kind));
  r.base.chi_target = state.chi_target;
  r.base.seed = cfg.seed;
  r.base.Nb = record.strings.size();
  r.base.run_id = fmt::format("{}-N{}-{}-refined", r.base.kind, r.base.N,
                              to_string(record.noise.mode));
  fill_noise_fields(r.base, record.noise);
  r.base.flags.push_back(fmt::format("closure={}", data.size()));
  if (result.diverged) r.base.flags.push_back("diverged");
  r.epochs = result.epochs_run;
  r.diverged = result.diverged;
  r.D_before = distance_D(state.tt, start);
  r.D_after = distance_D(state.tt, result.tt);
  if (r.base.N <= kMaxFidelityQubits) {
    const auto& target = target_fidelity(state);
    r.F_before = target(to_dense_operator(start));
    r.F_after = target(to_dense_operator(result.tt));
  } else {
    r.base.flags.push_back(fmt::format("F=null:N>{}", kMaxFidelityQubits));
  }

  if (trained) trained->emplace(result);
  return r;
}

void write_refine_header(std::ostream& out) {
  out << "run_id,N,kind,chi_target,noise_mode,eps,M,Nb,D_before,D_after,F_before,F_after,"
         "epochs,wall_ms,seed,flags\n";
}

void write_refine_row(std::ostream& out, const RefineRecord& r) {
  const auto& b = r.base;
  out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{:.3f},{},{}\n", b.run_id, b.N,
                     b.kind, b.chi_target, b.noise_mode, opt(b.eps),
                     b.M ? std::to_string(*b.M) : std::string(), b.Nb, r.D_before, r.D_after,
                     opt(r.F_before), opt(r.F_after), r.epochs, b.wall_ms, b.seed, join(b.flags));
}

void write_sweep_header(std::ostream& out) {
  out << "N,runs,failures,mean_D,mean_Ds,mean_Nb,three_pow_N\n";
}

int cmd_generate(const RunConfig& cfg) {
  const StateArtifact state = make_state(cfg.state);
  const fs::path path = cfg.resolve(cfg.state_file);
  write_state(path, state);
  spdlog::info("wrote {} (N={}, max bond {}, purity {:.6g})", path.string(), state.spec.N,
               state.tt.max_bond(), state.purity);
  return kOk;
}

int cmd_reconstruct(const RunConfig& cfg) {
  cfg.validate();
  const StateArtifact state = read_state(cfg.resolve(cfg.state_file));
  ensure_dir(cfg.out_dir);
  auto csv = open_append(cfg.resolve("runs.csv"), write_run_header);
  bool all_converged = true;
  double sum_d = 0.0;
  for (int rep = 0; rep < cfg.repetitions; ++rep) {
    const RunRecord r = reconstruct_once(state, cfg, rep, true);
    write_run_row(csv, r);
    csv.flush();
    all_converged = all_converged && r.converged;
    sum_d += r.D;
  }
  spdlog::info("{} run(s), mean D = {:.6g}", cfg.repetitions, sum_d / cfg.repetitions);
  return all_converged ? kOk : kNotConverged;
}

int cmd_sweep(const RunConfig& cfg) {
  cfg.validate();
  ensure_dir(cfg.out_dir);
  std::ofstream runs(cfg.resolve("sweep_runs.csv"));
  std::ofstream summary(cfg.resolve("sweep_summary.csv"));
  if (!runs || !summary) throw Error("cannot open sweep output files");
  write_run_header(runs);
  write_sweep_header(summary);
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    StateConfig spec = cfg.state;
    spec.N = n;
    int failures = 0, ok = 0;
    double sum_d = 0.0, sum_ds = 0.0, sum_nb = 0.0;
    std::optional<StateArtifact> state;
    try {
      state = make_state(spec);
    } catch (const std::exception& e) {
      spdlog::warn("N={}: state generation failed: {}", n, e.what());
      failures = cfg.repetitions;
    }
    for (int rep = 0; state && rep < cfg.repetitions; ++rep) {
      try {
        const RunRecord r = reconstruct_once(*state, cfg, rep, false);
        write_run_row(runs, r);
        sum_d += r.D;
        sum_ds += r.Ds.value_or(0.0);
        sum_nb += static_cast<double>(r.Nb);
        ++ok;
      } catch (const std::exception& e) {
        spdlog::warn("N={} repetition {}: {}", n, rep, e.what());
        ++failures;
      }
    }
    const auto mean = [&](double s) { return ok ? fmt::format("{}", s / ok) : std::string(); };
    summary << fmt::format("{},{},{},{},{},{},{}\n", n, ok, failures, mean(sum_d), mean(sum_ds),
                           mean(sum_nb), std::pow(3.0, n));
    summary.flush();
    runs.flush();
  }
  return kOk;
}

int cmd_refine(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.recon_file.empty() || cfg.record_file.empty()) {
    throw ConfigError("refine needs --recon and --record");
  }
  const StateArtifact state = read_state(cfg.resolve(cfg.state_file));
  const RealTensorTrain recon = load_real_tensor_train(cfg.resolve(cfg.recon_file));
  MeasurementRecord record;
  {
    std::ifstream in(cfg.resolve(cfg.record_file));
    if (!in) throw ConfigError(fmt::format("cannot open record {}", cfg.record_file.string()));
    record = read_record(in);
  }

  std::optional<TrainResult> trained;
  RefineRecord r = refine_once(state, recon, record, cfg, &trained);
  const TrainResult& result = *trained;
  r.base.run_id = cfg.record_file.stem().stem().string() + "-refined";

  ensure_dir(cfg.out_dir);
  save_tensor_train(cfg.resolve(r.base.run_id + ".tt"), result.tt);
  {
    std::ofstream loss(cfg.resolve(r.base.run_id + ".loss.csv"));
    loss << "epoch,loss\n";
    for (std::size_t e = 0; e < result.loss_history.size(); ++e) {
      loss << fmt::format("{},{}\n", e, result.loss_history[e]);
    }
  }
  auto csv = open_append(cfg.resolve("refine.csv"), write_refine_header);
  write_refine_row(csv, r);
  spdlog::info("D {:.4g} -> {:.4g} after {} epoch(s)", r.D_before, r.D_after, r.epochs);
  return result.diverged ? kNotConverged : kOk;
}

int cmd_metrics(const fs::path& reference, const fs::path& other,
                const std::optional<fs::path>& record_path, std::ostream& out) {
  const RealTensorTrain a = load_real_tensor_train(reference);
  const RealTensorTrain b = load_real_tensor_train(other);
  DistanceReport report;
  report.D = distance_D(a, b);
  if (static_cast<int>(a.size()) <= kMaxFidelityQubits) {
    report.fidelity = fidelity(to_dense_operator(a), to_dense_operator(b));
  }
  if (record_path) {
    std::ifstream in(*record_path);
    if (!in) throw ConfigError(fmt::format("cannot open record {}", record_path->string()));
    const MeasurementRecord rec = read_record(in);
    report.Ds = distance_Ds(rec.strings, rec.expectations, b);
    report.Nb = rec.strings.size();
  }
  json j{{"D", report.D}, {"Nb", report.Nb}};
  j["Ds"] = report.Ds ? json(*report.Ds) : json(nullptr);
  j["F"] = report.fidelity ? json(*report.fidelity) : json(nullptr);
  out << j.dump() << '\n';
  return kOk;
}

}  // namespace ttqst::cli
