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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "opuc/envelope.hpp"
#include "opuc/experiments.hpp"
#include "opuc/fft.hpp"
#include "opuc/kernels.hpp"
#include "opuc/szego.hpp"
#include "opuc/version.hpp"

namespace {

opuc::ExperimentConfig load_config(const std::string& spec) {
  // A path if the file exists, otherwise a preset name.
  if (std::filesystem::exists(spec)) return opuc::parse_config_file(spec);
  const auto names = opuc::preset_names();
  if (std::find(names.begin(), names.end(), spec) != names.end()) return opuc::preset(spec);
  throw opuc::ConfigError("no such config file or preset: '" + spec + "'");
}

void apply_overrides(opuc::ExperimentConfig& cfg, const std::string& out_dir,
                     std::int64_t seed) {
  if (!out_dir.empty()) cfg.outputs = out_dir;
  if (seed >= 0) {
    const auto u = static_cast<std::uint64_t>(seed);
    switch (cfg.randomizer.kind()) {
      case opuc::MultiplierKind::UniformPhase:
        cfg.randomizer = opuc::Randomizer::uniform_phase(u);
        break;
      case opuc::MultiplierKind::Rademacher:
        cfg.randomizer = opuc::Randomizer::rademacher(u);
        break;
      case opuc::MultiplierKind::ScaledUniformPhase:
        cfg.randomizer = opuc::Randomizer::scaled_uniform_phase(cfg.randomizer.radius(), u);
        break;
    }
  }
}

int report(const opuc::RunOutcome& outcome) {
  if (outcome.exit_code == opuc::kExitOk) {
    std::cout << "ok";
  } else {
    std::cout << outcome.failure;
  }
  std::cout << "\n";
  for (const auto& f : outcome.files) std::cout << "  wrote " << f << "\n";
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Szego recursion laboratory for randomized Verblunsky parameters"};
  app.set_version_flag("--version", std::string(OPUC_VERSION));
  app.require_subcommand(1);

  std::string run_config;
  std::string out_dir;
  std::int64_t seed = -1;

  auto* run_cmd = app.add_subcommand("run", "Run an experiment from a config file");
  run_cmd->add_option("config", run_config, "Config file (flat key = value)")->required();
  run_cmd->add_option("--out", out_dir, "Override the output directory");
  run_cmd->add_option("--seed", seed, "Override the randomizer seed");

  std::string preset_name;
  auto* preset_cmd = app.add_subcommand("preset", "Run a built-in preset");
  preset_cmd->add_option("name", preset_name, "zero|theorem1|theorem1-slow|sharpness12|explore-T2|diagnostics")
      ->required();
  preset_cmd->add_option("--out", out_dir, "Override the output directory");
  preset_cmd->add_option("--seed", seed, "Override the randomizer seed");

  std::string cfg_a, cfg_b;
  auto* compare_cmd = app.add_subcommand("compare", "Contrast two regimes checkpoint by checkpoint");
  compare_cmd->add_option("configA", cfg_a, "Config file or preset name")->required();
  compare_cmd->add_option("configB", cfg_b, "Config file or preset name")->required();
  compare_cmd->add_option("--out", out_dir, "Output directory for compare.csv");

  std::uint64_t oracle_n = 0;
  auto* oracle_cmd = app.add_subcommand("oracle", "Run the orthogonality oracle canary");
  oracle_cmd->add_option("--n", oracle_n, "Single degree (default: 4, 8, 16, 32)");
  oracle_cmd->add_option("--seed", seed, "Randomizer seed (default 99)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : opuc::kExitInvalidConfig;
  }

  try {
    if (run_cmd->parsed()) {
      auto cfg = opuc::parse_config_file(run_config);
      apply_overrides(cfg, out_dir, seed);
      return report(opuc::run_experiment(cfg));
    }
    if (preset_cmd->parsed()) {
      auto cfg = opuc::preset(preset_name);
      apply_overrides(cfg, out_dir, seed);
      return report(opuc::run_experiment(cfg));
    }
    if (compare_cmd->parsed()) {
      const auto a = load_config(cfg_a);
      const auto b = load_config(cfg_b);
      const auto result =
          opuc::compare_regimes(a, b, out_dir.empty() ? std::string("opuc-out/compare") : out_dir);
      if (result.exit_code != opuc::kExitOk) {
        std::cerr << result.failure << "\n";
        return result.exit_code;
      }
      std::printf("%10s %14s %14s %14s %14s %10s\n", "degree", "median_a", "p90_a", "median_b",
                  "p90_b", "ratio");
      for (const auto& row : result.rows)
        std::printf("%10llu %14.6g %14.6g %14.6g %14.6g %10.4f\n",
                    static_cast<unsigned long long>(row.degree), row.median_a, row.p90_a,
                    row.median_b, row.p90_b, row.ratio);
      for (const auto& f : result.files) std::cout << "  wrote " << f << "\n";
      return 0;
    }
    if (oracle_cmd->parsed()) {
      const auto randomizer = opuc::Randomizer::uniform_phase(seed >= 0 ? seed : 99);
      const auto envelope = opuc::Envelope::power_decay(1.0, 0.5);
      std::vector<std::uint64_t> degrees = {4, 8, 16, 32};
      if (oracle_n > 0) degrees = {oracle_n};
      int rc = opuc::kExitOk;
      for (std::uint64_t n : degrees) {
        const auto alphas = opuc::sample_parameters(envelope, randomizer, n, n);
        const std::size_t M = 8 * opuc::next_power_of_two(static_cast<std::size_t>(n) + 1);
        const double dev = opuc::orthogonality_oracle(alphas, M).max_deviation_from_identity();
        const bool pass = dev <= 1e-8;
        std::printf("n=%-4llu M=%-6zu max|Gram - I| = %.3e  %s\n",
                    static_cast<unsigned long long>(n), M, dev, pass ? "ok" : "FAIL");
        if (!pass) rc = opuc::kExitFalsified;
      }
      return rc;
    }
  } catch (const opuc::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return opuc::kExitInvalidConfig;
  } catch (const opuc::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return opuc::kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return opuc::kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return opuc::kExitInvalidConfig;
  }
  return 0;
}
