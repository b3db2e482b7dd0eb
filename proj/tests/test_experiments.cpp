/*
   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "opuc/experiments.hpp"

using namespace opuc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("opuc-test-" + tag);
  fs::remove_all(dir);
  return dir;
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(slurp(p));
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    rows.push_back(fields);
  }
  return rows;
}

ExperimentConfig small_zero(const fs::path& out) {
  ExperimentConfig cfg;
  cfg.name = "small-zero";
  cfg.envelope = Envelope::zero();
  cfg.randomizer = Randomizer::uniform_phase(1);
  cfg.trajectories = 2;
  cfg.max_degree = 128;
  cfg.checkpoints = power_of_two_checkpoints(128);
  cfg.suites = {"supnorm"};
  cfg.outputs = out.string();
  return cfg;
}

}  // namespace

TEST_CASE("zero-envelope supnorm run emits the documented schema") {
  const fs::path dir = fresh_dir("zero");
  const RunOutcome outcome = run_experiment(small_zero(dir));
  CHECK(outcome.exit_code == kExitOk);

  const auto rows = csv_rows(dir / "supnorm.csv");
  REQUIRE(!rows.empty());
  CHECK(rows[0] == std::vector<std::string>{"trajectory_id", "degree", "M", "grid_max",
                                            "upper_bound"});
  CHECK(rows.size() == 1 + 2 * power_of_two_checkpoints(128).size());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double grid_max = std::stod(rows[i][3]);
    CHECK(std::abs(grid_max - 1.0) <= 1e-10);
    CHECK(std::stod(rows[i][4]) >= grid_max);
  }

  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["name"] == "small-zero");
  CHECK(manifest["seed"] == 1);
  CHECK(manifest.contains("kernel"));
  CHECK(manifest["exit_code"] == 0);
  CHECK(manifest["suites"].contains("supnorm"));
}

TEST_CASE("csv bodies are byte-identical across reruns and thread counts") {
  const fs::path d1 = fresh_dir("det1");
  const fs::path d2 = fresh_dir("det2");
  const fs::path d3 = fresh_dir("det3");

  ExperimentConfig cfg;
  cfg.name = "det";
  cfg.envelope = Envelope::power_decay(1.0, 0.5);
  cfg.randomizer = Randomizer::uniform_phase(2024);
  cfg.trajectories = 4;
  cfg.max_degree = 256;
  cfg.checkpoints = power_of_two_checkpoints(256);
  cfg.suites = {"supnorm", "moments", "lattice"};
  cfg.moments_trials = 2000;
  cfg.lattice_repeats = 40;
  cfg.lattice_k_max = 1;

  cfg.outputs = d1.string();
  CHECK(run_experiment(cfg).exit_code == kExitOk);
  cfg.outputs = d2.string();
  CHECK(run_experiment(cfg).exit_code == kExitOk);

  setenv("OPUC_THREADS", "1", 1);
  cfg.outputs = d3.string();
  CHECK(run_experiment(cfg).exit_code == kExitOk);
  unsetenv("OPUC_THREADS");

  for (const char* f : {"supnorm.csv", "moments.csv", "lattice.csv"}) {
    CHECK(slurp(d1 / f) == slurp(d2 / f));
    CHECK(slurp(d1 / f) == slurp(d3 / f));
  }
}

TEST_CASE("diagnostics suites pass their gates on a small run") {
  const fs::path dir = fresh_dir("diag");
  ExperimentConfig cfg;
  cfg.name = "mini-diag";
  cfg.envelope = Envelope::power_decay(1.0, 0.5);
  cfg.randomizer = Randomizer::uniform_phase(99);
  cfg.trajectories = 1;
  cfg.max_degree = 64;
  cfg.checkpoints = power_of_two_checkpoints(64);
  cfg.suites = {"oracle", "martingale", "moments", "lattice"};
  cfg.martingale_trials = 10000;
  cfg.martingale_points = 2;
  cfg.moments_trials = 4000;
  cfg.lattice_repeats = 50;
  cfg.outputs = dir.string();

  const RunOutcome outcome = run_experiment(cfg);
  CHECK(outcome.exit_code == kExitOk);
  CHECK(outcome.metrics.at("oracle_max_deviation") <= 1e-8);

  CHECK(csv_rows(dir / "oracle.csv")[0] ==
        std::vector<std::string>{"n", "M", "max_deviation"});
  CHECK(csv_rows(dir / "martingale.csv")[0] ==
        std::vector<std::string>{"n", "j", "z_re", "z_im", "residual", "stderr", "trials"});
  CHECK(csv_rows(dir / "moments.csv")[0] ==
        std::vector<std::string>{"k", "p", "a_moment", "a_stderr", "b_moment", "b_stderr",
                                 "trials"});
  CHECK(csv_rows(dir / "lattice.csv")[0] ==
        std::vector<std::string>{"k", "lambda", "exceed_fraction", "bound", "repeats"});
}

TEST_CASE("sharpness suite emits witness rows and passes its gates") {
  const fs::path dir = fresh_dir("sharp");
  ExperimentConfig cfg = preset("sharpness12");
  cfg.sharpness_grid = 1ull << 17;  // cheaper grid, still resolved
  cfg.outputs = dir.string();
  const RunOutcome outcome = run_experiment(cfg);
  CHECK(outcome.exit_code == kExitOk);
  const auto rows = csv_rows(dir / "sharpness.csv");
  CHECK(rows[0] == std::vector<std::string>{"level", "measure", "bound", "theta_star",
                                            "achieved", "lower"});
  REQUIRE(rows.size() == 5);  // header + levels 0..3
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][1]) > 0.0);             // nonempty intersections
    CHECK(std::stod(rows[i][4]) + 1e-12 >= std::stod(rows[i][5]));  // achieved >= lower
  }
  CHECK(fs::exists(dir / "growth.csv"));
  CHECK(fs::exists(dir / "sharpness_deviation.csv"));
}

TEST_CASE("compare: identical configs give unit ratios") {
  const ExperimentConfig cfg = small_zero(fresh_dir("cmpa"));
  const CompareOutcome out = compare_regimes(cfg, cfg, fresh_dir("cmp-out").string());
  REQUIRE(out.exit_code == kExitOk);
  for (const auto& row : out.rows) CHECK(row.ratio == 1.0);
}

TEST_CASE("compare: explicit [0.5] sits exactly 1.5x above the zero regime") {
  ExperimentConfig a = small_zero(fresh_dir("cmpz"));
  ExperimentConfig b = a;
  b.name = "half";
  b.envelope = Envelope::explicit_values({0.5});
  // Rademacher keeps alpha_0 = +/- 0.5 real, so the grid hits the true sup
  // exactly and the regime ratio is exactly 3/2 at every degree >= 1.
  b.randomizer = Randomizer::rademacher(7);
  const CompareOutcome out = compare_regimes(a, b, fresh_dir("cmp-out2").string());
  REQUIRE(out.exit_code == kExitOk);
  for (const auto& row : out.rows) {
    if (row.degree >= 1) CHECK(row.ratio == doctest::Approx(1.5).epsilon(1e-12));
  }

  ExperimentConfig c = a;
  c.checkpoints = {1, 2};
  c.max_degree = 2;
  const CompareOutcome mismatch = compare_regimes(a, c, fresh_dir("cmp-out3").string());
  CHECK(mismatch.exit_code == kExitInvalidConfig);
}

TEST_CASE("degree budget overrun reports exit 3 with partial results") {
  const fs::path dir = fresh_dir("budget");
  ExperimentConfig cfg;
  cfg.name = "over-budget";
  cfg.envelope = Envelope::zero();
  cfg.randomizer = Randomizer::uniform_phase(3);
  cfg.trajectories = 1;
  cfg.max_degree = 20001;
  cfg.checkpoints = {16, 20001};
  cfg.suites = {"supnorm"};
  cfg.outputs = dir.string();
  const RunOutcome outcome = run_experiment(cfg);
  CHECK(outcome.exit_code == kExitBudget);
  const auto rows = csv_rows(dir / "supnorm.csv");
  CHECK(rows.size() == 2);  // header + the checkpoint that fit the budget
}
