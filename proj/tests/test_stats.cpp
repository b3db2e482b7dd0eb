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

#include "opuc/prufer.hpp"
#include "opuc/stats.hpp"

using namespace opuc;

TEST_CASE("doubly exponential lattice blocks") {
  const BlockSpec b0 = g_lattice(0);
  CHECK(b0.lo == 2);
  CHECK(b0.hi == 4);
  const BlockSpec b2 = g_lattice(2);
  CHECK(b2.lo == 16);
  CHECK(b2.hi == 256);
  const BlockSpec b3 = g_lattice(3);
  CHECK(b3.hi == 65536);

  CHECK_THROWS_AS(g_lattice(4), std::invalid_argument);  // default desk budget
  const BlockSpec b4 = g_lattice(4, 1ull << 33);
  CHECK(b4.lo == 65536);
  CHECK(b4.hi == 4294967296ull);
  CHECK_THROWS_AS(g_lattice(5, ~0ull), std::overflow_error);
}

TEST_CASE("lambda thresholds: trivial envelopes and the brute-force anchor") {
  for (std::uint32_t k = 0; k <= 3; ++k) {
    CHECK(lambda_threshold(Envelope::zero(), k) == 0.0);
    CHECK(lambda_threshold(Envelope::explicit_values({0.5}), k) == 0.0);
  }
  CHECK_THROWS_AS(lambda_threshold(Envelope::zero(), 4), std::invalid_argument);

  const Envelope env = Envelope::power_decay(1.0, 0.5);
  // Independent oracle: R_4 by ascending brute force at the default horizon.
  double r4 = 0.0;
  for (std::uint64_t m = 4; m < kDefaultTailHorizon; ++m) {
    const double a = env.a(m);
    r4 += a * a;
  }
  const double expected = 3.0 * std::sqrt(std::log(16.0) * r4);
  const double lambda1 = lambda_threshold(env, 1);
  CHECK(lambda1 == doctest::Approx(expected).epsilon(1e-12));
  CHECK(lambda1 == doctest::Approx(1.0635532476271854).epsilon(1e-12));  // frozen anchor
}

TEST_CASE("block sums: trivial and single-term cases") {
  const BlockSpec b = g_lattice(1);  // [4, 16]
  const std::vector<Complex> zeros(b.hi + 1, Complex{0.0, 0.0});
  const BlockSums empty = block_sum_pair(zeros, 0.9, b);
  CHECK(empty.a_sum == Complex{0.0, 0.0});
  CHECK(empty.b_sum == Complex{0.0, 0.0});
  CHECK(empty.running_max_a == 0.0);

  std::vector<Complex> single(b.hi + 1, Complex{0.0, 0.0});
  single[b.lo] = Complex{0.1, 0.0};
  const BlockSums one = block_sum_pair(single, 1.3, b);
  CHECK(std::abs(one.a_sum) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(std::abs(one.b_sum) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(one.running_max_a == doctest::Approx(0.1).epsilon(1e-14));

  std::vector<Complex> short_seq(b.hi, Complex{0.0, 0.0});
  CHECK_THROWS_AS(block_sum_pair(short_seq, 0.0, b), std::invalid_argument);
}

TEST_CASE("laws of |A_k| and |B_k| coincide under uniform phases") {
  const Envelope env = Envelope::power_decay(1.0, 0.5);
  const Randomizer rnd = Randomizer::uniform_phase(1001);
  const BlockSpec b = g_lattice(1);
  const std::size_t trials = 10000;
  std::vector<double> a_mod, b_mod;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto alphas = sample_parameters(env, rnd, t, b.hi + 1);
    const BlockSums sums = block_sum_pair(alphas, 0.7, b);
    a_mod.push_back(std::abs(sums.a_sum));
    b_mod.push_back(std::abs(sums.b_sum));
  }
  CHECK(ks_statistic(a_mod, b_mod) < ks_threshold(trials, trials, 1e-3));
}

TEST_CASE("moment comparison: closed form at p = 2, domination at p = 4") {
  const Envelope env = Envelope::power_decay(1.0, 0.5);
  const Randomizer rnd = Randomizer::uniform_phase(1002);
  const BlockSpec b = g_lattice(1);

  const MomentReport m2 = moment_compare(env, rnd, b, 0.7, 2, 10000);
  double closed = 0.0;
  for (std::uint64_t j = b.lo; j <= b.hi; ++j) closed += env.a(j) * env.a(j);
  CHECK(m2.block_energy == doctest::Approx(closed).epsilon(1e-14));
  CHECK(std::abs(m2.b_moment - closed) <= 3.0 * m2.b_stderr);
  CHECK(std::abs(m2.a_moment - closed) <= 3.0 * m2.a_stderr);
  const double combined2 = std::sqrt(m2.a_stderr * m2.a_stderr + m2.b_stderr * m2.b_stderr);
  CHECK(std::abs(m2.a_moment - m2.b_moment) <= 3.0 * combined2);

  const MomentReport m4 = moment_compare(env, rnd, b, 0.7, 4, 10000);
  const double combined4 = std::sqrt(m4.a_stderr * m4.a_stderr + m4.b_stderr * m4.b_stderr);
  CHECK(m4.a_moment <= m4.b_moment + 3.0 * combined4);

  const MomentReport zero = moment_compare(Envelope::zero(), rnd, b, 0.7, 2, 1000);
  CHECK(zero.a_moment == 0.0);
  CHECK(zero.b_moment == 0.0);

  CHECK_THROWS_AS(moment_compare(env, rnd, b, 0.7, 3, 10000), std::invalid_argument);
  CHECK_THROWS_AS(moment_compare(env, rnd, b, 0.7, 2, 10), std::invalid_argument);
}

TEST_CASE("martingale residual: exact zero-tail case and statistical cases") {
  const Randomizer rnd = Randomizer::uniform_phase(1003);
  const std::vector<Complex> prefix = {Complex{0.5, 0.0}, Complex{0.0, 0.3}};

  // Zero envelope tail: Phi*_j = Phi*_n pathwise, residual exactly 0.
  const MartingaleResult exact =
      martingale_residual(prefix, Complex{1.0, 0.0}, 8, Envelope::zero(), rnd, 10000);
  CHECK(exact.residual == 0.0);

  // n = 0, j = 1: E[Phi*_1] = 1 - a_0 z E[omega_0] = 1.
  const MartingaleResult first = martingale_residual(
      {}, std::polar(1.0, 0.7), 1, Envelope::power_decay(1.0, 0.5), rnd, 20000);
  CHECK(first.reference == Complex{1.0, 0.0});
  CHECK(first.residual <= 4.0 * first.stderr_value);

  // n = 8, j = 64 with 1e5 tail samples.
  const Envelope env = Envelope::power_decay(1.0, 0.5);
  const auto fixed = sample_parameters(env, Randomizer::uniform_phase(555), 1234, 8);
  const MartingaleResult big =
      martingale_residual(fixed, std::polar(1.0, 0.7), 64, env, rnd, 100000);
  CHECK(big.residual <= 4.0 * big.stderr_value);

  CHECK_THROWS_AS(martingale_residual(prefix, Complex{1.0, 0.0}, 2, env, rnd, 10000),
                  std::invalid_argument);
  CHECK_THROWS_AS(martingale_residual(prefix, Complex{1.0, 0.0}, 8, env, rnd, 100),
                  std::invalid_argument);
}

TEST_CASE("martingale residual matrix holds across degrees and points") {
  const Envelope env = Envelope::power_decay(1.0, 0.5);
  const Randomizer rnd = Randomizer::uniform_phase(1004);
  PhiloxStream zs(6, 6);
  int checked = 0;
  for (std::uint64_t n : {4ull, 8ull})
    for (std::uint64_t j : {32ull, 64ull})
      for (int p = 0; p < 3; ++p) {
        const auto prefix = sample_parameters(env, Randomizer::uniform_phase(99), 0, n);
        const Complex z = std::polar(1.0, 2.0 * 3.14159265358979 * zs.uniform01(checked));
        const MartingaleResult r = martingale_residual(prefix, z, j, env, rnd, 10000);
        CHECK(r.residual <= 4.0 * r.stderr_value);
        ++checked;
      }
  CHECK(checked == 12);
}

TEST_CASE("lattice diagnostic: degenerate thresholds never fire, bounds hold") {
  const Randomizer rnd = Randomizer::uniform_phase(1005);

  const LatticeReport zero = lattice_diagnostic(Envelope::zero(), rnd, 1, 16, 50);
  CHECK(zero.exceed_fraction == 0.0);
  CHECK(zero.lambda == 0.0);

  // Support below G(0): empty block sums and lambda = 0; strict exceedance
  // keeps the event count at zero.
  const LatticeReport expl =
      lattice_diagnostic(Envelope::explicit_values({0.5}), rnd, 0, 4, 50);
  CHECK(expl.exceed_fraction == 0.0);

  const Envelope env = Envelope::power_decay(1.0, 0.5);
  for (std::uint32_t k = 0; k <= 2; ++k) {
    const std::size_t theta_count = std::min<std::size_t>(64, 1ull << (1ull << (k + 1)));
    const LatticeReport r = lattice_diagnostic(env, rnd, k, theta_count, 200);
    CHECK(r.bound == doctest::Approx(std::exp(-std::pow(2.0, k) * std::log(2.0))).epsilon(1e-15));
    CHECK(r.exceed_fraction <= r.bound + 3.0 * r.binomial_stderr);
  }
  // The union-bound values quoted for k = 0..3.
  CHECK(lattice_diagnostic(env, rnd, 0, 4, 10).bound == doctest::Approx(0.5));
  CHECK(lattice_diagnostic(env, rnd, 1, 4, 10).bound == doctest::Approx(0.25));
  CHECK(lattice_diagnostic(env, rnd, 2, 4, 10).bound == doctest::Approx(0.0625));
  CHECK(lattice_diagnostic(env, rnd, 3, 4, 10).bound == doctest::Approx(0.00390625));

  CHECK_THROWS_AS(lattice_diagnostic(env, rnd, 0, 5, 10), std::invalid_argument);
  CHECK_THROWS_AS(lattice_diagnostic(env, rnd, 4, 4, 10), std::invalid_argument);
}

TEST_CASE("ks statistic separates distinct samples and accepts equal ones") {
  std::vector<double> a, b, c;
  PhiloxStream s(8, 8);
  for (int i = 0; i < 4000; ++i) {
    a.push_back(s.uniform01(i, 0));
    b.push_back(s.uniform01(i + 4000, 0));
    c.push_back(0.5 + s.uniform01(i + 8000, 0));  // shifted law
  }
  CHECK(ks_statistic(a, b) < ks_threshold(a.size(), b.size(), 1e-3));
  CHECK(ks_statistic(a, c) > ks_threshold(a.size(), c.size(), 1e-3));
  CHECK(ks_statistic(a, a) == 0.0);
}
