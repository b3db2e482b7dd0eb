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

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "opuc/envelope.hpp"
#include "opuc/rng.hpp"

namespace opuc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One experiment: ensemble, trajectory budget, and the suites to run.
/// Parsed from a flat key = value file; unknown keys are rejected.
struct ExperimentConfig {
  std::string name = "unnamed";
  Envelope envelope = Envelope::zero();
  Randomizer randomizer = Randomizer::uniform_phase(0);
  std::uint64_t trajectories = 1;
  std::uint64_t max_degree = 1024;
  std::vector<std::uint64_t> checkpoints;  // sorted ascending; defaulted to powers of two
  unsigned oversample = 32;
  std::string outputs = "opuc-out";
  std::vector<std::string> suites;  // subset of {supnorm, martingale, moments, lattice, sharpness, oracle}
  double plateau_threshold = 0.0;   // 0 disables the bounded-regime flatness check

  std::vector<std::uint64_t> martingale_prefixes{4, 8};
  std::vector<std::uint64_t> martingale_tails{32, 64};
  std::uint64_t martingale_trials = 20000;
  unsigned martingale_points = 3;

  std::uint32_t moments_k = 1;
  double moments_theta = 0.7;
  std::uint64_t moments_trials = 10000;

  std::uint32_t lattice_k_max = 2;
  std::uint64_t lattice_theta_count = 64;
  std::uint32_t lattice_repeats = 200;

  std::uint32_t sharpness_levels = 3;
  std::uint64_t sharpness_grid = 1ull << 18;
  bool sharpness_exploratory = false;  // growth probe only, no alignment gate

  std::vector<std::uint64_t> oracle_degrees{4, 8, 16, 32};
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Flat key-value echo of a config (the documented serialization), used for
/// the run manifest and for writing config files.
std::map<std::string, std::string> to_key_values(const ExperimentConfig& config);

std::string to_config_text(const ExperimentConfig& config);

/// Default checkpoint lattice: powers of two up to max_degree, inclusive.
std::vector<std::uint64_t> power_of_two_checkpoints(std::uint64_t max_degree);

}  // namespace opuc
