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

#include "opuc/config.hpp"
#include "opuc/experiments.hpp"

using namespace opuc;

TEST_CASE("round trip through the flat key-value format") {
  ExperimentConfig cfg;
  cfg.name = "roundtrip";
  cfg.envelope = Envelope::sparse_geometric(12, 0.01, SlowFunction::Log);
  cfg.randomizer = Randomizer::scaled_uniform_phase(0.5, 31337);
  cfg.trajectories = 5;
  cfg.max_degree = 2048;
  cfg.checkpoints = {1, 64, 2048};
  cfg.oversample = 16;
  cfg.suites = {"sharpness"};
  cfg.sharpness_levels = 2;
  cfg.sharpness_grid = 1 << 14;

  const ExperimentConfig parsed = parse_config_text(to_config_text(cfg));
  CHECK(to_key_values(parsed) == to_key_values(cfg));
  CHECK(parsed.envelope.kind() == EnvelopeKind::SparseGeometric);
  CHECK(parsed.envelope.psi() == SlowFunction::Log);
  CHECK(parsed.randomizer.kind() == MultiplierKind::ScaledUniformPhase);
  CHECK(parsed.randomizer.radius() == 0.5);
  CHECK(parsed.randomizer.seed() == 31337);
  CHECK(parsed.checkpoints == cfg.checkpoints);
}

TEST_CASE("documented envelope keys parse") {
  const auto cfg = parse_config_text(
      "envelope.kind = power\n"
      "envelope.exponent = 0.75\n"
      "envelope.scale = 0.5\n"
      "randomizer.kind = uniform_phase\n"
      "randomizer.seed = 42\n");
  CHECK(cfg.envelope.kind() == EnvelopeKind::PowerDecay);
  CHECK(cfg.envelope.exponent() == 0.75);
  CHECK(cfg.randomizer.seed() == 42);
  // Defaults fill in.
  CHECK(cfg.suites == std::vector<std::string>{"supnorm"});
  CHECK(cfg.checkpoints == power_of_two_checkpoints(cfg.max_degree));

  const auto expl = parse_config_text(
      "envelope.kind = explicit\n"
      "envelope.values = 0.5, -0.25, 0.125\n");
  CHECK(expl.envelope.values() == std::vector<double>{0.5, -0.25, 0.125});
}

TEST_CASE("comments, blanks, and spacing are tolerated") {
  const auto cfg = parse_config_text(
      "# an experiment\n"
      "\n"
      "name = spaced   # trailing comment\n"
      "trajectories=3\n");
  CHECK(cfg.name == "spaced");
  CHECK(cfg.trajectories == 3);
}

TEST_CASE("malformed configs are rejected with ConfigError") {
  CHECK_THROWS_AS(parse_config_text("bogus_key = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("trajectories = soon\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("name\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("name = a\nname = b\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("envelope.kind = cubist\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("envelope.kind = power\nenvelope.exponent = 0.4\n"
                                    "envelope.scale = 0.5\n"),
                  std::invalid_argument);  // square-summability gate
  CHECK_THROWS_AS(parse_config_text("checkpoints = 8,4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("checkpoints = 8,2048\nmax_degree = 1024\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("suites = supnorm,unknown\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("suites = sharpness\n"), ConfigError);  // needs sparse envelope
  CHECK_THROWS_AS(parse_config_text("oversample = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_file("/nonexistent/opuc.cfg"), ConfigError);
}

TEST_CASE("presets construct and carry their documented regimes") {
  for (const auto& name : preset_names()) {
    const ExperimentConfig cfg = preset(name);
    CHECK(cfg.name == name);
    CHECK(!cfg.suites.empty());
    // Round trip through the text format.
    const ExperimentConfig parsed = parse_config_text(to_config_text(cfg));
    CHECK(to_key_values(parsed) == to_key_values(cfg));
  }
  CHECK(preset("theorem1").plateau_threshold == 1.10);
  CHECK(preset("theorem1").envelope.exponent() == 1.0);
  CHECK(preset("theorem1-slow").envelope.exponent() == 0.75);
  CHECK(preset("sharpness12").envelope.sparse_base() == 12);
  CHECK(preset("explore-T2").sharpness_exploratory);
  CHECK_THROWS_AS(preset("nope"), ConfigError);
}
