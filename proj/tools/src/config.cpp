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

#include "ttqst/cli/config.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "ttqst/error.hpp"
#include "ttqst/states.hpp"

namespace ttqst::cli {

using nlohmann::json;

std::string_view to_string(StateKind kind) {
  return kind == StateKind::lptn ? "lptn" : "thermal";
}

StateKind parse_state_kind(std::string_view text) {
  if (text == "lptn") return StateKind::lptn;
  if (text == "thermal") return StateKind::thermal;
  throw ConfigError(fmt::format("unknown state kind '{}'", text));
}

void StateConfig::validate() const {
  if (kind == StateKind::lptn) {
    LptnSpec{N, kappa, K, seed}.validate();
  } else {
    ThermalSpec{N, g, T}.validate();
  }
  if (!(tt_tol > 0)) throw ConfigError("tt_tol must be positive");
}

RunConfig::RunConfig() {
  train.learning_rate = 1e-4;
  train.patience = 30;
  train.epochs = 1000;
}

void RunConfig::validate() const {
  state.validate();
  noise.validate();
  cross.validate();
  train.validate();
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (n_min < 1) throw ConfigError("n_min must be at least 1");
}

std::filesystem::path RunConfig::resolve(const std::filesystem::path& p) const {
  return p.is_absolute() ? p : out_dir / p;
}

CrossConfig RunConfig::cross_for(const MeasurementChannel& channel, std::uint64_t run_seed) const {
  CrossConfig c = cross;
  c.seed = run_seed;
  if (auto_pinv_cutoff && channel.noise().mode != NoiseMode::exact) {
    c.pinv_cutoff = channel.noise_level();
  }
  return c;
}

json to_json(const RunConfig& c) {
  return json{
      {"state",
       {{"kind", to_string(c.state.kind)},
        {"N", c.state.N},
        {"kappa", c.state.kappa},
        {"K", c.state.K},
        {"seed", c.state.seed},
        {"g", c.state.g},
        {"T", c.state.T},
        {"tt_tol", c.state.tt_tol}}},
      {"noise",
       {{"mode", to_string(c.noise.mode)}, {"epsilon", c.noise.epsilon}, {"shots", c.noise.shots}}},
      {"cross",
       {{"max_rank", c.cross.max_rank},
        {"local_tol", c.cross.local_tol},
        {"max_sweeps", c.cross.max_sweeps},
        {"maxvol_tol", c.cross.maxvol_tol},
        {"pinv_cutoff", c.cross.pinv_cutoff},
        {"auto_pinv_cutoff", c.auto_pinv_cutoff},
        {"validation_size", c.cross.validation_size}}},
      {"train",
       {{"learning_rate", c.train.learning_rate},
        {"beta1", c.train.beta1},
        {"beta2", c.train.beta2},
        {"eps_adam", c.train.eps_adam},
        {"batch_size", c.train.batch_size},
        {"epochs", c.train.epochs},
        {"patience", c.train.patience},
        {"freeze_identity", c.train.freeze_identity}}},
      {"out_dir", c.out_dir.string()},
      {"state_file", c.state_file.string()},
      {"recon_file", c.recon_file.string()},
      {"record_file", c.record_file.string()},
      {"seed", c.seed},
      {"repetitions", c.repetitions},
      {"n_min", c.n_min},
      {"n_max", c.n_max}};
}

namespace {

// Reads the listed keys of an object, rejecting anything else.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(fmt::format("'{}' must be an object", where_));
  }
  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(fmt::format("bad value for '{}.{}': {}", where_, key, e.what()));
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw ConfigError(fmt::format("unknown key '{}' in '{}'", it.key(), where_));
      }
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

}  // namespace

RunConfig config_from_json(const json& j) {
  RunConfig c;
  Reader top(j, "config");
  if (const json* s = top.child("state")) {
    Reader r(*s, "state");
    std::string kind{to_string(c.state.kind)};
    r.get("kind", kind);
    c.state.kind = parse_state_kind(kind);
    r.get("N", c.state.N);
    r.get("kappa", c.state.kappa);
    r.get("K", c.state.K);
    r.get("seed", c.state.seed);
    r.get("g", c.state.g);
    r.get("T", c.state.T);
    r.get("tt_tol", c.state.tt_tol);
    r.finish();
  }
  if (const json* s = top.child("noise")) {
    Reader r(*s, "noise");
    std::string mode{to_string(c.noise.mode)};
    r.get("mode", mode);
    c.noise.mode = parse_noise_mode(mode);
    r.get("epsilon", c.noise.epsilon);
    r.get("shots", c.noise.shots);
    r.finish();
  }
  if (const json* s = top.child("cross")) {
    Reader r(*s, "cross");
    r.get("max_rank", c.cross.max_rank);
    r.get("local_tol", c.cross.local_tol);
    r.get("max_sweeps", c.cross.max_sweeps);
    r.get("maxvol_tol", c.cross.maxvol_tol);
    r.get("pinv_cutoff", c.cross.pinv_cutoff);
    r.get("auto_pinv_cutoff", c.auto_pinv_cutoff);
    r.get("validation_size", c.cross.validation_size);
    r.finish();
  }
  if (const json* s = top.child("train")) {
    Reader r(*s, "train");
    r.get("learning_rate", c.train.learning_rate);
    r.get("beta1", c.train.beta1);
    r.get("beta2", c.train.beta2);
    r.get("eps_adam", c.train.eps_adam);
    r.get("batch_size", c.train.batch_size);
    r.get("epochs", c.train.epochs);
    r.get("patience", c.train.patience);
    r.get("freeze_identity", c.train.freeze_identity);
    r.finish();
  }
  std::string out_dir = c.out_dir.string(), state_file = c.state_file.string(),
              recon_file = c.recon_file.string(), record_file = c.record_file.string();
  top.get("out_dir", out_dir);
  top.get("state_file", state_file);
  top.get("recon_file", recon_file);
  top.get("record_file", record_file);
  c.out_dir = out_dir;
  c.state_file = state_file;
  c.recon_file = recon_file;
  c.record_file = record_file;
  top.get("seed", c.seed);
  top.get("repetitions", c.repetitions);
  top.get("n_min", c.n_min);
  top.get("n_max", c.n_max);
  top.finish();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file {}", path.string()));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config file {} is not valid JSON: {}", path.string(), e.what()));
  }
  return config_from_json(j);
}

void save_config(const std::filesystem::path& path, const RunConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  out << to_json(cfg).dump(2) << '\n';
}

}  // namespace ttqst::cli
