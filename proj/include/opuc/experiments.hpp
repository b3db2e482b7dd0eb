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

#pragma once

#include <map>
#include <string>
#include <vector>

#include "opuc/config.hpp"

namespace opuc {

// Exit statuses shared by the library runner and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFalsified = 1;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitBudget = 3;

struct RunOutcome {
  int exit_code = kExitOk;
  std::string failure;                  // names the violated invariant and record
  std::vector<std::string> files;       // emitted artifacts
  std::map<std::string, double> metrics;
};

/// Runs every configured suite, writing per-suite CSV files plus a JSON
/// manifest into the config's output directory. CSV bodies are deterministic
/// under a fixed seed (timestamps and wall times live only in the manifest).
RunOutcome run_experiment(const ExperimentConfig& config);

struct RegimeSummaryRow {
  std::uint64_t degree = 0;
  double median_a = 0.0, p90_a = 0.0;
  double median_b = 0.0, p90_b = 0.0;
  double ratio = 0.0;  // median_b / median_a
};

struct CompareOutcome {
  int exit_code = kExitOk;
  std::string failure;
  std::vector<RegimeSummaryRow> rows;
  std::vector<std::string> files;
};

/// Per-checkpoint distributional contrast of two regimes (median and 90th
/// percentile of the certified sup). Requires identical checkpoint lists.
CompareOutcome compare_regimes(const ExperimentConfig& a, const ExperimentConfig& b,
                               const std::string& out_dir);

std::vector<std::string> preset_names();

/// Built-in, seeded configurations: zero, theorem1, theorem1-slow,
/// sharpness12, explore-T2, diagnostics.
ExperimentConfig preset(const std::string& name);

}  // namespace opuc
