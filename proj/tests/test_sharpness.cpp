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

#include <cmath>
#include <vector>

#include "opuc/envelope.hpp"
#include "opuc/rng.hpp"
#include "opuc/sharpness.hpp"

using namespace opuc;

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

TEST_CASE("level indices are powers of T with a base at 1") {
  CHECK(level_index(12, 0) == 1);
  CHECK(level_index(12, 1) == 12);
  CHECK(level_index(12, 2) == 144);
  CHECK(level_index(12, 3) == 1728);
  CHECK(level_index(2, 13) == 8192);
  CHECK_THROWS_AS(level_index(12, 60), std::overflow_error);
}

TEST_CASE("T-condition arithmetic") {
  for (std::uint32_t N = 0; N <= 6; ++N) {
    CHECK(t_condition_holds(12, N));
    // The ratio itself stays above 13/2.
    const double tn = std::pow(12.0, N);
    CHECK((12.0 * tn + 1.0) / (tn + 1.0) >= 6.5);
  }
  CHECK(t_condition_holds(13, 0));
  CHECK_FALSE(t_condition_holds(2, 0));
  CHECK_FALSE(t_condition_holds(11, 0));  // 12/2 = 6 < 13/2
}

TEST_CASE("alignment set: zero coefficient gives the full circle") {
  std::vector<Complex> alphas(200, Complex{0.0, 0.0});
  const AlignmentSet full = alignment_set(alphas, 12, 1, 2048);
  CHECK(full.full_circle);
  CHECK(full.total_measure == doctest::Approx(kTwoPi));
  CHECK(full.largest_run_measure == doctest::Approx(kTwoPi));
}

TEST_CASE("alignment set base case reproduces the pi/3 interval") {
  // alpha_1 real positive with a free step below it: gamma_1 = 2 theta, so
  // the set {cos(2 theta) >= 1/2} has two runs of measure pi/3 each.
  std::vector<Complex> alphas = {Complex{0.0, 0.0}, Complex{0.5, 0.0}};
  const std::size_t grid = 4096;
  const AlignmentSet base = alignment_set(alphas, 12, 0, grid);
  const double h = kTwoPi / grid;
  CHECK(base.total_measure >= 2.0 * kPi / 3.0 - 4.0 * h);
  CHECK(base.total_measure <= 2.0 * kPi / 3.0 + 4.0 * h);
  CHECK(base.largest_run_measure >= kPi / 3.0 - 2.0 * h);
  CHECK(base.unresolved_runs == 0);
  CHECK(base.runs.size() == 2);
}

TEST_CASE("alignment set at level 2 of the deterministic construction") {
  // T = 12, eps = 0.01, psi = 1, omega = 1: alpha_144 = 0.005 real.
  const Envelope env = Envelope::sparse_geometric(12, 0.01, SlowFunction::One);
  std::vector<Complex> alphas(145, Complex{0.0, 0.0});
  for (std::size_t j = 0; j < alphas.size(); ++j) alphas[j] = Complex{env.a(j), 0.0};
  const std::size_t grid = 1 << 16;
  const AlignmentSet set = alignment_set(alphas, 12, 2, grid);
  const double bound = (kTwoPi + kPi / 6.0) / (std::pow(12.0, 3) + 1.0);
  CHECK(set.total_measure >= bound);
  // With all free steps below 144 the winding is exactly 145, so the set is
  // 145 windows of measure ~ (2 pi / 3) / 145.
  CHECK(set.total_measure == doctest::Approx(2.0 * kPi / 3.0).epsilon(0.01));
  CHECK(set.runs.size() == 145);
  CHECK(set.unresolved_runs == 0);

  CHECK_THROWS_AS(alignment_set(alphas, 12, 2, 4096), std::invalid_argument);  // unresolved grid
}

TEST_CASE("intersection witness: all-zero construction is vacuous but sound") {
  std::vector<Complex> alphas(1729, Complex{0.0, 0.0});
  const BlowupWitness w = intersection_witness(alphas, 12, 3, 1 << 17);
  CHECK_FALSE(w.empty);
  CHECK(w.sound);
  CHECK(w.achieved == 0.0);
  CHECK(w.aligned_sum_lower == 0.0);
  CHECK(w.intersection_measure == doctest::Approx(kTwoPi));
}

TEST_CASE("intersection witness at J = 0 inherits the base-case measure") {
  std::vector<Complex> alphas = {Complex{0.0, 0.0}, Complex{0.3, 0.4}};
  const std::size_t grid = 8192;
  const BlowupWitness w = intersection_witness(alphas, 12, 0, grid);
  CHECK_FALSE(w.empty);
  CHECK(w.sound);
  CHECK(w.intersection_measure >= kPi / 3.0 - w.resolution);
  CHECK(w.largest_run_measure >= kPi / 3.0 - 2.0 * w.resolution);
  CHECK(w.achieved >= w.aligned_sum_lower);
  CHECK(w.induction_bound == doctest::Approx((kTwoPi + kPi / 6.0) / 13.0).epsilon(1e-12));
}

TEST_CASE("random sharpness construction: nonempty intersection, sound witness") {
  const Envelope env = Envelope::sparse_geometric(12, 0.01, SlowFunction::One);
  const auto alphas = sample_parameters(env, Randomizer::uniform_phase(4242), 0, 1729);
  const std::size_t grid = 1 << 17;
  const BlowupWitness w = intersection_witness(alphas, 12, 3, grid);
  CHECK_FALSE(w.empty);
  CHECK(w.sound);
  CHECK(w.achieved >= w.aligned_sum_lower);
  CHECK(w.intersection_measure >= w.induction_bound - 2.0 * w.resolution);
  // Deviation hypothesis verified at every tracked level.
  for (std::uint32_t level = 0; level <= 3; ++level)
    CHECK(max_alignment_deviation(alphas, level_index(12, level), 4096) <= kPi / 12.0);
}

TEST_CASE("growth trajectory: trivial and single-term cases") {
  std::vector<Complex> zeros(145, Complex{0.0, 0.0});
  const auto flat = growth_trajectory(zeros, 12, 2, 512);
  REQUIRE(flat.size() == 3);
  for (const auto& p : flat) CHECK(p.grid_max == 0.0);

  std::vector<Complex> single(145, Complex{0.0, 0.0});
  single[144] = Complex{0.05, 0.0};
  const auto one = growth_trajectory(single, 12, 2, 512);
  REQUIRE(one.size() == 3);
  CHECK(one[2].grid_max >= 0.025);
  CHECK(one[2].grid_max <= 0.05 + 1e-12);
  CHECK(one[2].half_modulus_sum == doctest::Approx(0.025).epsilon(1e-15));
}

TEST_CASE("small-T exploratory growth probe climbs with the level") {
  // Outside the T >= 12 guarantee; an empirical probe only.
  const Envelope env = Envelope::sparse_geometric(2, 0.1, SlowFunction::One);
  const auto alphas = sample_parameters(env, Randomizer::uniform_phase(777), 0, 1025);
  const auto growth = growth_trajectory(alphas, 2, 10, 4096);
  REQUIRE(growth.size() == 11);
  CHECK(growth.back().grid_max > growth[2].grid_max);
  CHECK(growth.back().grid_max >= 0.5 * growth.back().half_modulus_sum);
}
