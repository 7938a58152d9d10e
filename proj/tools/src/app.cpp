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

#include <cstdlib>
#include <iostream>
#include <optional>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "ttqst/cli/commands.hpp"
#include "ttqst/error.hpp"

namespace ttqst::cli {

namespace {

// Flag values; only the ones given on the command line are applied on top
// of the config file.
struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> out_dir;
  bool dump_config = false;

  bool lptn = false;
  bool thermal = false;
  std::optional<int> n;
  std::optional<Index> kappa;
  std::optional<Index> kraus;
  std::optional<std::uint64_t> state_seed;
  std::optional<double> temperature;
  std::optional<double> field;
  std::optional<double> tt_tol;
  std::optional<std::string> out;

  std::optional<std::string> state;
  std::optional<std::string> noise;
  std::optional<double> eps;
  std::optional<std::int64_t> shots;
  std::optional<Index> max_rank;
  std::optional<double> local_tol;
  std::optional<int> max_sweeps;
  std::optional<double> maxvol_tol;
  std::optional<double> pinv_cutoff;
  std::optional<int> repetitions;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_min;
  std::optional<int> n_max;

  std::optional<std::string> recon;
  std::optional<std::string> record;
  std::optional<double> lr;
  std::optional<int> epochs;
  std::optional<Index> batch_size;
  std::optional<int> patience;
  bool no_freeze_identity = false;

  std::string metrics_a;
  std::string metrics_b;
  std::optional<std::string> metrics_record;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON run configuration");
  app->add_option("--out-dir", f.out_dir, "output directory (default: $TTQST_OUT_DIR or .)");
  app->add_flag("--dump-config", f.dump_config, "print the effective configuration and exit");
}

void add_state_spec(CLI::App* app, Flags& f, const char* seed_flag) {
  auto* l = app->add_flag("--lptn", f.lptn, "random locally purified state");
  auto* t = app->add_flag("--thermal", f.thermal, "thermal transverse-field Ising state");
  l->excludes(t);
  app->add_option("--kappa", f.kappa, "purification bond dimension");
  app->add_option("--kraus", f.kraus, "Kraus dimension per site");
  app->add_option(seed_flag, f.state_seed, "seed for the random state");
  app->add_option("--t", f.temperature, "temperature");
  app->add_option("--g", f.field, "transverse field");
  app->add_option("--tt-tol", f.tt_tol, "TT-SVD cutoff for thermal states");
}

void add_measurement(CLI::App* app, Flags& f) {
  app->add_option("--noise", f.noise, "exact | gaussian | shots")
      ->check(CLI::IsMember({"exact", "gaussian", "shots"}));
  app->add_option("--eps", f.eps, "relative error (gaussian)");
  app->add_option("--shots", f.shots, "copies per basis (shots)");
  app->add_option("--max-rank", f.max_rank);
  app->add_option("--local-tol", f.local_tol);
  app->add_option("--max-sweeps", f.max_sweeps);
  app->add_option("--maxvol-tol", f.maxvol_tol);
  app->add_option("--pinv-cutoff", f.pinv_cutoff, "fixed cutoff (disables the noise-tied default)");
  app->add_option("--repetitions", f.repetitions);
  app->add_option("--seed", f.seed, "run seed; repetition i uses seed + i");
}

RunConfig effective_config(const Flags& f) {
  RunConfig c = f.config ? load_config(*f.config) : RunConfig{};
  if (f.out_dir) {
    c.out_dir = *f.out_dir;
  } else if (const char* env = std::getenv("TTQST_OUT_DIR"); env && *env) {
    c.out_dir = env;
  }
  if (f.lptn) c.state.kind = StateKind::lptn;
  if (f.thermal) c.state.kind = StateKind::thermal;
  if (f.n) c.state.N = *f.n;
  if (f.kappa) c.state.kappa = *f.kappa;
  if (f.kraus) c.state.K = *f.kraus;
  if (f.state_seed) c.state.seed = *f.state_seed;
  if (f.temperature) c.state.T = *f.temperature;
  if (f.field) c.state.g = *f.field;
  if (f.tt_tol) c.state.tt_tol = *f.tt_tol;
  if (f.out) c.state_file = *f.out;
  if (f.state) c.state_file = *f.state;
  if (f.noise) c.noise.mode = parse_noise_mode(*f.noise);
  if (f.eps) c.noise.epsilon = *f.eps;
  if (f.shots) c.noise.shots = *f.shots;
  if (f.max_rank) c.cross.max_rank = *f.max_rank;
  if (f.local_tol) c.cross.local_tol = *f.local_tol;
  if (f.max_sweeps) c.cross.max_sweeps = *f.max_sweeps;
  if (f.maxvol_tol) c.cross.maxvol_tol = *f.maxvol_tol;
  if (f.pinv_cutoff) {
    c.cross.pinv_cutoff = *f.pinv_cutoff;
    c.auto_pinv_cutoff = false;
  }
  if (f.repetitions) c.repetitions = *f.repetitions;
  if (f.seed) c.seed = *f.seed;
  if (f.n_min) c.n_min = *f.n_min;
  if (f.n_max) c.n_max = *f.n_max;
  if (f.recon) c.recon_file = *f.recon;
  if (f.record) c.record_file = *f.record;
  if (f.lr) c.train.learning_rate = *f.lr;
  if (f.epochs) c.train.epochs = *f.epochs;
  if (f.batch_size) c.train.batch_size = *f.batch_size;
  if (f.patience) c.train.patience = *f.patience;
  if (f.no_freeze_identity) c.train.freeze_identity = false;
  return c;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Pauli-basis state tomography by tensor-train cross approximation", "ttqst"};
  app.require_subcommand(1);
  Flags f;

  auto* gen = app.add_subcommand("generate", "write a target state and its metadata");
  add_common(gen, f);
  add_state_spec(gen, f, "--seed");
  gen->add_option("--n", f.n, "number of qubits");
  gen->add_option("--out", f.out, "state file (relative to the output directory)");

  auto* rec = app.add_subcommand("reconstruct", "measure a state and reconstruct it");
  add_common(rec, f);
  rec->add_option("--state", f.state, "state file written by generate");
  add_measurement(rec, f);

  auto* sweep = app.add_subcommand("sweep", "reconstruct a family of states over a range of N");
  add_common(sweep, f);
  add_state_spec(sweep, f, "--state-seed");
  add_measurement(sweep, f);
  sweep->add_option("--n-min", f.n_min);
  sweep->add_option("--n-max", f.n_max);

  auto* ref = app.add_subcommand("refine", "train a reconstruction on its measurement closure");
  add_common(ref, f);
  ref->add_option("--state", f.state, "target state file");
  ref->add_option("--recon", f.recon, "reconstructed train");
  ref->add_option("--record", f.record, "measurement record");
  ref->add_option("--lr", f.lr);
  ref->add_option("--epochs", f.epochs);
  ref->add_option("--batch-size", f.batch_size);
  ref->add_option("--patience", f.patience);
  ref->add_option("--seed", f.seed, "shuffling seed");
  ref->add_flag("--no-freeze-identity", f.no_freeze_identity);

  auto* met = app.add_subcommand("metrics", "compare two Pauli-coefficient trains");
  met->add_option("--a", f.metrics_a, "reference state")->required();
  met->add_option("--b", f.metrics_b, "other state")->required();
  met->add_option("--record", f.metrics_record, "measurement record for D_s");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (met->parsed()) return cmd_metrics(f.metrics_a, f.metrics_b, f.metrics_record, std::cout);
    const RunConfig cfg = effective_config(f);
    if (f.dump_config) {
      std::cout << to_json(cfg).dump(2) << '\n';
      return kOk;
    }
    if (gen->parsed()) return cmd_generate(cfg);
    if (rec->parsed()) return cmd_reconstruct(cfg);
    if (sweep->parsed()) return cmd_sweep(cfg);
    if (ref->parsed()) return cmd_refine(cfg);
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return kUsage;
  } catch (const SizeLimitError& e) {
    spdlog::error("{}", e.what());
    return kUsage;
  } catch (const DimensionError& e) {
    spdlog::error("{}", e.what());
    return kUsage;
  } catch (const NumericalError& e) {
    spdlog::error("numerical failure: {}", e.what());
    return kNumerical;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kFailure;
  }
  return kUsage;
}

}  // namespace ttqst::cli
