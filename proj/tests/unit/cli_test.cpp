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
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"
#include "ttqst/cli/commands.hpp"
#include "ttqst/cli/config.hpp"
#include "ttqst/states.hpp"
#include "ttqst/tt_io.hpp"

namespace ttqst::cli {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ttqst-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv("TTQST_OUT_DIR");
  }
  void TearDown() override {
    unsetenv("TTQST_OUT_DIR");
    fs::remove_all(dir_);
  }

  int run(std::vector<std::string> args, bool with_dir = true) {
    if (with_dir) {
      args.push_back("--out-dir");
      args.push_back(dir_.string());
    }
    std::vector<const char*> argv{"ttqst"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  static std::vector<std::vector<std::string>> csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      if (!line.empty() && line.back() == ',') cells.emplace_back();
      rows.push_back(cells);
    }
    return rows;
  }

  fs::path dir_;
};

TEST(Config, JsonRoundTrip) {
  RunConfig c;
  c.state.kind = StateKind::thermal;
  c.state.N = 7;
  c.state.T = 0.25;
  c.noise.mode = NoiseMode::shots;
  c.noise.shots = 12345;
  c.cross.max_rank = 6;
  c.cross.local_tol = 0.125;
  c.auto_pinv_cutoff = false;
  c.train.learning_rate = 3e-4;
  c.out_dir = "some/where";
  c.repetitions = 3;
  c.seed = 99;
  const auto j = to_json(c);
  const auto back = config_from_json(j);
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(to_json(config_from_json(to_json(RunConfig{}))), to_json(RunConfig{}));
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  auto j = to_json(RunConfig{});
  j["cross"]["max_rnak"] = 3;
  EXPECT_THROW(config_from_json(j), ConfigError);
  j = to_json(RunConfig{});
  j["repetitions"] = 0;
  EXPECT_THROW(config_from_json(j).validate(), ConfigError);
  j = to_json(RunConfig{});
  j["state"]["kind"] = "ghz";
  EXPECT_THROW(config_from_json(j), ConfigError);
}

TEST(Config, ExperimentDefaults) {
  const RunConfig c;
  EXPECT_EQ(c.cross.max_rank, 10);
  EXPECT_EQ(c.cross.local_tol, 1e-3);
  EXPECT_EQ(c.noise.epsilon, 0.01);
  EXPECT_EQ(c.noise.shots, 1000000);
  EXPECT_EQ(c.repetitions, 80);
}

TEST_F(Cli, GenerateIsDeterministic) {
  ASSERT_EQ(run({"generate", "--lptn", "--n", "8", "--kappa", "4", "--seed", "7"}), kOk);
  const auto first = slurp(dir_ / "state.tt");
  const auto meta = nlohmann::json::parse(slurp(dir_ / "state.tt.json"));
  EXPECT_EQ(meta["chi_target"], 16);
  EXPECT_LE(load_real_tensor_train(dir_ / "state.tt").max_bond(), 16);
  ASSERT_EQ(run({"generate", "--lptn", "--n", "8", "--kappa", "4", "--seed", "7"}), kOk);
  EXPECT_EQ(slurp(dir_ / "state.tt"), first);
}

TEST_F(Cli, GenerateThermalBondProfile) {
  ASSERT_EQ(run({"generate", "--thermal", "--n", "8", "--t", "2.0", "--tt-tol", "1e-8"}), kOk);
  const auto meta = nlohmann::json::parse(slurp(dir_ / "state.tt.json"));
  const auto state = load_real_tensor_train(dir_ / "state.tt");
  EXPECT_EQ(meta["bond_profile"].get<std::vector<Index>>(), state.bond_dims());
  EXPECT_EQ(state.bond_dims(), thermal_ising({8, 1.0, 2.0}, 1e-8).bond_dims());
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({"generate", "--lptn", "--kappa", "0"}), kUsage);
  EXPECT_EQ(run({"generate", "--lptn", "--thermal"}), kUsage);
  EXPECT_EQ(run({"generate", "--bogus"}), kUsage);
  EXPECT_EQ(run({"generate", "--thermal", "--n", "13"}), kUsage);
  EXPECT_EQ(run({}, false), kUsage);
  EXPECT_EQ(run({"reconstruct", "--state", "missing.tt"}), kFailure);
}

TEST_F(Cli, ReconstructExactThermal) {
  ASSERT_EQ(run({"generate", "--thermal", "--n", "8", "--t", "2"}), kOk);
  ASSERT_EQ(run({"reconstruct", "--noise", "exact", "--repetitions", "1"}), kOk);
  const auto rows = csv(dir_ / "runs.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(slurp(dir_ / "runs.csv").substr(0, 71),
            "run_id,N,kind,chi_target,noise_mode,eps,M,Nb,D,Ds,F,wall_ms,seed,flags\n");
  EXPECT_EQ(rows[1][0], "thermal-N8-exact-s0");
  EXPECT_LT(std::stod(rows[1][8]), 1e-6);
  EXPECT_FALSE(rows[1][10].empty());
  EXPECT_TRUE(fs::exists(dir_ / "thermal-N8-exact-s0.recon.tt"));
  EXPECT_TRUE(fs::exists(dir_ / "thermal-N8-exact-s0.skeleton.txt"));
  EXPECT_TRUE(fs::exists(dir_ / "ledger.csv"));
}

TEST_F(Cli, ReconstructExactLptnTenQubits) {
  ASSERT_EQ(run({"generate", "--lptn", "--n", "10", "--kappa", "4", "--seed", "1"}), kOk);
  ASSERT_EQ(run({"reconstruct", "--repetitions", "1", "--noise", "exact"}), kOk);
  const auto rows = csv(dir_ / "runs.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_LT(std::stod(rows[1][8]), 1e-2);
  EXPECT_FALSE(rows[1][10].empty());
}

TEST_F(Cli, GaussianRepetitionsAndRegenerableRows) {
  ASSERT_EQ(run({"generate", "--lptn", "--n", "4", "--kappa", "2"}), kOk);
  const int rc = run({"reconstruct", "--noise", "gaussian", "--eps", "0.01", "--seed", "3"});
  EXPECT_TRUE(rc == kOk || rc == kNotConverged);
  const auto rows = csv(dir_ / "runs.csv");
  ASSERT_EQ(rows.size(), 81u);
  EXPECT_EQ(rows[1][12], "3");
  EXPECT_EQ(rows[80][12], "82");
  // Rerunning one repetition from its seed reproduces the row.
  fs::rename(dir_ / "runs.csv", dir_ / "first.csv");
  run({"reconstruct", "--noise", "gaussian", "--eps", "0.01", "--seed", "40", "--repetitions", "1"});
  const auto again = csv(dir_ / "runs.csv");
  auto same = rows[38];
  auto redo = again[1];
  same[11] = redo[11] = "";  // wall_ms
  EXPECT_EQ(same, redo);
}

TEST_F(Cli, NonConvergenceExitCode) {
  ASSERT_EQ(run({"generate", "--lptn", "--n", "6", "--kappa", "4"}), kOk);
  EXPECT_EQ(run({"reconstruct", "--repetitions", "1", "--max-sweeps", "1"}), kNotConverged);
  const auto rows = csv(dir_ / "runs.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NE(rows[1][13].find("not_converged"), std::string::npos);
}

TEST_F(Cli, SweepTables) {
  ASSERT_EQ(run({"sweep", "--lptn", "--kappa", "2", "--n-min", "9", "--n-max", "9",
                 "--repetitions", "1", "--noise", "exact"}),
            kOk);
  const auto summary = csv(dir_ / "sweep_summary.csv");
  ASSERT_EQ(summary.size(), 2u);
  EXPECT_EQ(summary[0], (std::vector<std::string>{"N", "runs", "failures", "mean_D", "mean_Ds",
                                                  "mean_Nb", "three_pow_N"}));
  EXPECT_LT(std::stod(summary[1][5]), std::stod(summary[1][6]));
  EXPECT_EQ(std::stod(summary[1][6]), 19683.0);
}

TEST_F(Cli, EmptySweepWritesHeadersOnly) {
  ASSERT_EQ(run({"sweep", "--n-min", "5", "--n-max", "4"}), kOk);
  EXPECT_EQ(csv(dir_ / "sweep_runs.csv").size(), 1u);
  EXPECT_EQ(csv(dir_ / "sweep_summary.csv").size(), 1u);
}

TEST_F(Cli, RefineZeroEpochsKeepsDistance) {
  ASSERT_EQ(run({"generate", "--lptn", "--n", "5", "--kappa", "2"}), kOk);
  run({"reconstruct", "--repetitions", "1", "--noise", "shots", "--shots", "10000", "--seed", "2"});
  ASSERT_EQ(run({"refine", "--recon", "lptn-N5-shots-s2.recon.tt", "--record",
                 "lptn-N5-shots-s2.record.txt", "--epochs", "0"}),
            kOk);
  const auto rows = csv(dir_ / "refine.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][8], rows[1][9]);
  EXPECT_TRUE(fs::exists(dir_ / "lptn-N5-shots-s2-refined.tt"));
  EXPECT_TRUE(fs::exists(dir_ / "lptn-N5-shots-s2-refined.loss.csv"));
}

TEST_F(Cli, RefineRejectsForeignRecord) {
  ASSERT_EQ(run({"generate", "--lptn", "--n", "5", "--kappa", "2"}), kOk);
  run({"reconstruct", "--repetitions", "1", "--noise", "shots", "--shots", "1000"});
  ASSERT_EQ(run({"generate", "--lptn", "--n", "5", "--kappa", "2", "--seed", "9"}), kOk);
  EXPECT_NE(run({"refine", "--recon", "lptn-N5-shots-s0.recon.tt", "--record",
                 "lptn-N5-shots-s0.record.txt", "--epochs", "1"}),
            kOk);
}

TEST_F(Cli, MetricsReport) {
  ASSERT_EQ(run({"generate", "--lptn", "--n", "4", "--kappa", "2"}), kOk);
  const auto state = (dir_ / "state.tt").string();
  std::ostringstream out;
  ASSERT_EQ(cmd_metrics(state, state, std::nullopt, out), kOk);
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_NEAR(j["D"].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(j["F"].get<double>(), 1.0, 1e-9);

  save_tensor_train(dir_ / "zero.tt",
                    product_tt(std::vector<std::vector<double>>(4, std::vector<double>(4, 0.0))));
  EXPECT_EQ(run({"metrics", "--a", (dir_ / "zero.tt").string(), "--b", state}, false), kNumerical);
}

TEST_F(Cli, OutputDirectoryPrecedence) {
  const fs::path from_config = dir_ / "cfg", from_env = dir_ / "env", from_flag = dir_ / "flag";
  RunConfig c;
  c.out_dir = from_config;
  c.state.N = 3;
  c.state.kappa = 1;
  save_config(dir_ / "run.json", c);
  const std::string cfg = (dir_ / "run.json").string();
  ASSERT_EQ(run({"generate", "--config", cfg}, false), kOk);
  EXPECT_TRUE(fs::exists(from_config / "state.tt"));
  setenv("TTQST_OUT_DIR", from_env.c_str(), 1);
  ASSERT_EQ(run({"generate", "--config", cfg}, false), kOk);
  EXPECT_TRUE(fs::exists(from_env / "state.tt"));
  ASSERT_EQ(run({"generate", "--config", cfg, "--out-dir", from_flag.string()}, false), kOk);
  EXPECT_TRUE(fs::exists(from_flag / "state.tt"));
}

TEST_F(Cli, DumpConfigReflectsFlags) {
  testing::internal::CaptureStdout();
  ASSERT_EQ(run({"reconstruct", "--max-rank", "6", "--eps", "0.02", "--dump-config"}), kOk);
  const auto j = nlohmann::json::parse(testing::internal::GetCapturedStdout());
  const auto c = config_from_json(j);
  EXPECT_EQ(c.cross.max_rank, 6);
  EXPECT_EQ(c.noise.epsilon, 0.02);
}

}  // namespace
}  // namespace ttqst::cli
