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

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "opuc/envelope.hpp"
#include "opuc/rng.hpp"

namespace opuc {

using Complex = std::complex<double>;

/// Doubly exponential block [G(k), G(k+1)] with G(k) = 2^(2^k).
struct BlockSpec {
  std::uint32_t k = 0;
  std::uint64_t lo = 2;
  std::uint64_t hi = 4;
};

inline constexpr std::uint64_t kDefaultBlockBudget = 65536;

/// Rejects blocks whose upper edge G(k+1) overflows u64 (k >= 5) or exceeds
/// the desk-scale budget (default caps at k <= 3).
BlockSpec g_lattice(std::uint32_t k, std::uint64_t max_hi = kDefaultBlockBudget);

/// lambda_k = 3 sqrt(log(G(k+1)) R_{G(k)}), natural log.
double lambda_threshold(const Envelope& env, std::uint32_t k);

/// A = sum over the block of alpha_j e^(i gamma_j(theta)), B the plain sum,
/// plus the running max of |partial A| over the block. Endpoints inclusive,
/// so alphas must cover index hi.
struct BlockSums {
  Complex a_sum{0.0, 0.0};
  Complex b_sum{0.0, 0.0};
  double running_max_a = 0.0;
};

BlockSums block_sum_pair(std::span<const Complex> alphas, double theta, const BlockSpec& b);

struct MomentReport {
  std::uint32_t k = 0;
  unsigned p = 2;
  double a_moment = 0.0;
  double a_stderr = 0.0;
  double b_moment = 0.0;
  double b_stderr = 0.0;
  std::uint64_t trials = 0;
  double block_energy = 0.0;  // sum of a_j^2 over the block: E|B|^2 in closed form
};

/// Monte Carlo estimates of E|A_k|^p and E|B_k|^p over independent trials
/// (one trajectory substream per trial). p in {2, 4}, trials >= 1000.
MomentReport moment_compare(const Envelope& env, const Randomizer& randomizer,
                            const BlockSpec& b, double theta, unsigned p,
                            std::uint64_t trials);

struct MartingaleResult {
  double residual = 0.0;
  double stderr_value = 0.0;
  std::uint64_t trials = 0;
  Complex tail_mean{0.0, 0.0};
  Complex reference{0.0, 0.0};  // Phi*_n(z) of the fixed prefix
};

/// Holds the prefix alphas fixed, samples `trials` independent tails up to
/// degree j, and reports |mean Phi*_j(z) - Phi*_n(z)| together with the
/// Monte Carlo standard error of the mean (components combined in
/// quadrature). Under zero-mean multipliers the residual is statistical noise
/// only. trials >= 10^4.
MartingaleResult martingale_residual(std::span<const Complex> prefix, Complex z,
                                     std::uint64_t j, const Envelope& env,
                                     const Randomizer& randomizer, std::uint64_t trials);

struct LatticeReport {
  std::uint32_t k = 0;
  double lambda = 0.0;
  double exceed_fraction = 0.0;
  double bound = 0.0;          // exp(-2^k log 2), the union-bound value
  double binomial_stderr = 0.0;
  std::uint32_t repeats = 0;
  std::size_t theta_count = 0;
};

/// Samples `repeats` trajectories; for each, scans the equispaced theta grid
/// and records whether the running block-sum maximum strictly exceeds
/// lambda_k anywhere. theta_count <= G(k+1), k <= 3.
LatticeReport lattice_diagnostic(const Envelope& env, const Randomizer& randomizer,
                                 std::uint32_t k, std::size_t theta_count,
                                 std::uint32_t repeats = 200);

/// Two-sample Kolmogorov-Smirnov statistic sup |F1 - F2|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Asymptotic rejection threshold c(alpha) sqrt((n + m) / (n m)) with
/// c(alpha) = sqrt(-log(alpha / 2) / 2).
double ks_threshold(std::size_t n, std::size_t m, double alpha);

}  // namespace opuc
