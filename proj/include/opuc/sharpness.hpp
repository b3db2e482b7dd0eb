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

namespace opuc {

using Complex = std::complex<double>;

/// Levels index the sparse lattice: level j lives at index T^j, so level 0 is
/// the synthetic base at index 1. A construction whose support starts at T^2
/// simply has trivial (full-circle) sets at levels 0 and 1.
std::uint64_t level_index(std::uint32_t T, std::uint32_t level);

/// Grid-resolved sublevel set
///   Lambda_j = { theta : |alpha_{T^j}| <= 2 Re(alpha_{T^j} e^(i gamma_{T^j}(theta))) }
/// on the equispaced grid theta_m = 2 pi m / grid. Maximal circular runs of
/// satisfying grid points; measures count grid cells, and every claim carries
/// the cell width as its resolution.
struct AlignmentSet {
  std::uint32_t level = 0;
  std::uint64_t index = 0;          // T^level
  std::size_t grid = 0;
  double resolution = 0.0;          // 2 pi / grid
  bool full_circle = false;         // alpha at the index is zero
  std::vector<std::pair<std::uint32_t, std::uint32_t>> runs;  // (start cell, cell count)
  double total_measure = 0.0;
  double largest_run_measure = 0.0;
  std::uint32_t unresolved_runs = 0;  // runs shorter than 2 cells, reported not rejected
};

AlignmentSet alignment_set(std::span<const Complex> alphas, std::uint32_t T,
                           std::uint32_t level, std::size_t grid);

/// Witness for the blow-up construction: a grid angle in the intersection of
/// the alignment sets through level J, at which the aligned real-part sum
/// dominates half the modulus sum.
struct BlowupWitness {
  std::uint32_t deepest_level = 0;
  bool empty = false;               // falsification flag: intersection empty
  double theta_star = 0.0;
  double achieved = 0.0;            // sum of Re(alpha_{T^j} e^(i gamma_{T^j}(theta*)))
  double aligned_sum_lower = 0.0;   // (1/2) sum |alpha_{T^j}|
  double intersection_measure = 0.0;
  double largest_run_measure = 0.0;
  double induction_bound = 0.0;     // (2 pi + pi/6) / (T^(J+1) + 1)
  double resolution = 0.0;
  bool sound = false;               // per-level inequality re-checked at theta*
};

BlowupWitness intersection_witness(std::span<const Complex> alphas, std::uint32_t T,
                                   std::uint32_t max_level, std::size_t grid);

/// Per-level grid maximum of |sum_{n <= T^j} alpha_n e^(i gamma_n(theta))|.
struct GrowthPoint {
  std::uint32_t level = 0;
  std::uint64_t index = 0;
  double grid_max = 0.0;
  double half_modulus_sum = 0.0;    // (1/2) sum_{i <= j} |alpha_{T^i}|
};

std::vector<GrowthPoint> growth_trajectory(std::span<const Complex> alphas, std::uint32_t T,
                                           std::uint32_t levels, std::size_t grid);

/// (T^(N+1) + 1) / (T^N + 1) >= 13/2, the arithmetic gate of the induction.
bool t_condition_holds(std::uint32_t T, std::uint32_t N);

/// Max over the theta grid of |gamma_j(theta) - gamma_j(0) - (j+1) theta| at
/// the given level index.
double max_alignment_deviation(std::span<const Complex> alphas, std::uint64_t index,
                               std::size_t grid);

}  // namespace opuc
