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

#include "opuc/sharpness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "opuc/prufer.hpp"

namespace opuc {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 2.0 * kPi;

std::vector<double> grid_thetas(std::size_t grid) {
  std::vector<double> thetas(grid);
  for (std::size_t m = 0; m < grid; ++m)
    thetas[m] = kTwoPi * static_cast<double>(m) / static_cast<double>(grid);
  return thetas;
}

// Maximal circular runs of set cells.
struct RunSummary {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> runs;
  std::uint64_t total_cells = 0;
  std::uint32_t largest = 0;
  std::uint32_t unresolved = 0;
};

RunSummary collect_runs(const std::vector<std::uint8_t>& mask) {
  const std::size_t grid = mask.size();
  RunSummary out;
  std::size_t first_unset = grid;
  for (std::size_t m = 0; m < grid; ++m)
    if (!mask[m]) {
      first_unset = m;
      break;
    }
  if (first_unset == grid) {
    out.runs.emplace_back(0u, static_cast<std::uint32_t>(grid));
    out.total_cells = grid;
    out.largest = static_cast<std::uint32_t>(grid);
    return out;
  }
  // Walk once around the circle starting just past an unset cell so runs
  // never straddle the scan origin.
  std::size_t m = first_unset;
  std::size_t seen = 0;
  while (seen < grid) {
    while (seen < grid && !mask[m]) {
      m = (m + 1) % grid;
      ++seen;
    }
    if (seen >= grid) break;
    const std::size_t start = m;
    std::uint32_t count = 0;
    while (seen < grid && mask[m]) {
      m = (m + 1) % grid;
      ++seen;
      ++count;
    }
    out.runs.emplace_back(static_cast<std::uint32_t>(start), count);
    out.total_cells += count;
    out.largest = std::max(out.largest, count);
    if (count < 2) ++out.unresolved;
  }
  return out;
}

void require_coverage(std::span<const Complex> alphas, std::uint64_t index) {
  if (alphas.size() <= index)
    throw std::invalid_argument("sharpness: alphas must cover the level index");
}

bool aligned(Complex alpha, double gamma) {
  // |alpha| <= 2 Re(alpha e^(i gamma))
  const double re = alpha.real() * std::cos(gamma) - alpha.imag() * std::sin(gamma);
  return std::abs(alpha) <= 2.0 * re;
}

}  // namespace

std::uint64_t level_index(std::uint32_t T, std::uint32_t level) {
  if (T < 2) throw std::invalid_argument("level_index: T must be >= 2");
  std::uint64_t idx = 1;
  for (std::uint32_t i = 0; i < level; ++i) {
    if (idx > std::numeric_limits<std::uint64_t>::max() / T)
      throw std::overflow_error("level_index: T^level overflows");
    idx *= T;
  }
  return idx;
}

AlignmentSet alignment_set(std::span<const Complex> alphas, std::uint32_t T,
                           std::uint32_t level, std::size_t grid) {
  const std::uint64_t index = level_index(T, level);
  require_coverage(alphas, index);
  if (grid < 64 * (index + 1))
    throw std::invalid_argument("alignment_set: grid must be >= 64 (T^level + 1)");

  AlignmentSet set;
  set.level = level;
  set.index = index;
  set.grid = grid;
  set.resolution = kTwoPi / static_cast<double>(grid);

  const Complex alpha = alphas[index];
  if (alpha == Complex{0.0, 0.0}) {
    set.full_circle = true;
    set.runs.emplace_back(0u, static_cast<std::uint32_t>(grid));
    set.total_measure = kTwoPi;
    set.largest_run_measure = kTwoPi;
    return set;
  }

  const auto thetas = grid_thetas(grid);
  PhaseTrackBatch tracks(thetas);
  for (std::uint64_t m = 0; m < index; ++m) tracks.step(alphas[m]);

  std::vector<std::uint8_t> mask(grid, 0);
  for (std::size_t m = 0; m < grid; ++m) mask[m] = aligned(alpha, tracks.gamma(m)) ? 1 : 0;

  const RunSummary summary = collect_runs(mask);
  set.runs = summary.runs;
  set.total_measure = static_cast<double>(summary.total_cells) * set.resolution;
  set.largest_run_measure = static_cast<double>(summary.largest) * set.resolution;
  set.unresolved_runs = summary.unresolved;
  return set;
}

BlowupWitness intersection_witness(std::span<const Complex> alphas, std::uint32_t T,
                                   std::uint32_t max_level, std::size_t grid) {
  const std::uint64_t deepest_index = level_index(T, max_level);
  require_coverage(alphas, deepest_index);
  if (grid < 64 * (deepest_index + 1))
    throw std::invalid_argument("intersection_witness: grid must be >= 64 (T^J + 1)");

  BlowupWitness witness;
  witness.deepest_level = max_level;
  witness.resolution = kTwoPi / static_cast<double>(grid);
  witness.induction_bound =
      (kTwoPi + kPi / 6.0) / (static_cast<double>(level_index(T, max_level + 1)) + 1.0);

  const auto thetas = grid_thetas(grid);
  PhaseTrackBatch tracks(thetas);
  std::vector<std::uint8_t> mask(grid, 1);

  double half_sum = 0.0;
  std::uint64_t m = 0;
  for (std::uint32_t level = 0; level <= max_level; ++level) {
    const std::uint64_t index = level_index(T, level);
    while (m < index) {
      tracks.step(alphas[m]);
      ++m;
    }
    const Complex alpha = alphas[index];
    if (alpha == Complex{0.0, 0.0}) continue;  // full circle at this level
    half_sum += 0.5 * std::abs(alpha);
    for (std::size_t i = 0; i < grid; ++i)
      if (mask[i] && !aligned(alpha, tracks.gamma(i))) mask[i] = 0;
  }
  witness.aligned_sum_lower = half_sum;

  const RunSummary summary = collect_runs(mask);
  witness.intersection_measure = static_cast<double>(summary.total_cells) * witness.resolution;
  witness.largest_run_measure = static_cast<double>(summary.largest) * witness.resolution;
  if (summary.total_cells == 0) {
    witness.empty = true;
    return witness;
  }

  // Grid angle at the center of the largest run.
  std::uint32_t best_start = 0, best_count = 0;
  for (const auto& [start, count] : summary.runs)
    if (count > best_count) {
      best_start = start;
      best_count = count;
    }
  const std::size_t star_cell = (best_start + best_count / 2) % grid;
  witness.theta_star = kTwoPi * static_cast<double>(star_cell) / static_cast<double>(grid);

  // Soundness re-check: a fresh scalar track at theta*, per-level inequality
  // evaluated pointwise rather than through grid membership.
  PhaseTrack at_star = init_track(witness.theta_star);
  std::uint64_t pos = 0;
  bool sound = true;
  double achieved = 0.0;
  for (std::uint32_t level = 0; level <= max_level; ++level) {
    const std::uint64_t index = level_index(T, level);
    while (pos < index) {
      at_star = phase_step(at_star, alphas[pos]);
      ++pos;
    }
    const Complex alpha = alphas[index];
    if (alpha == Complex{0.0, 0.0}) continue;
    const double gamma = at_star.gamma();
    achieved += alpha.real() * std::cos(gamma) - alpha.imag() * std::sin(gamma);
    if (!aligned(alpha, gamma)) sound = false;
  }
  witness.achieved = achieved;
  witness.sound = sound;
  return witness;
}

std::vector<GrowthPoint> growth_trajectory(std::span<const Complex> alphas, std::uint32_t T,
                                           std::uint32_t levels, std::size_t grid) {
  const std::uint64_t deepest_index = level_index(T, levels);
  require_coverage(alphas, deepest_index);
  if (grid == 0) throw std::invalid_argument("growth_trajectory: grid must be positive");

  const auto thetas = grid_thetas(grid);
  PhaseTrackBatch tracks(thetas);
  std::vector<Complex> partial(grid, Complex{0.0, 0.0});

  std::vector<GrowthPoint> out;
  out.reserve(levels + 1);
  double half_sum = 0.0;
  std::uint32_t level = 0;
  std::uint64_t next_level_index = 1;  // T^0

  for (std::uint64_t m = 0; m <= deepest_index; ++m) {
    if (alphas[m] != Complex{0.0, 0.0}) {
      const Complex alpha = alphas[m];
      for (std::size_t i = 0; i < grid; ++i) partial[i] += alpha * tracks.phase_factor(i);
    }
    while (level <= levels && m == next_level_index) {
      if (alphas[m] != Complex{0.0, 0.0}) half_sum += 0.5 * std::abs(alphas[m]);
      GrowthPoint point;
      point.level = level;
      point.index = next_level_index;
      point.half_modulus_sum = half_sum;
      double best = 0.0;
      for (std::size_t i = 0; i < grid; ++i) best = std::max(best, std::norm(partial[i]));
      point.grid_max = std::sqrt(best);
      out.push_back(point);
      ++level;
      next_level_index = level_index(T, level);
    }
    if (m < deepest_index) tracks.step(alphas[m]);
  }
  return out;
}

bool t_condition_holds(std::uint32_t T, std::uint32_t N) {
  // 2 (T^(N+1) + 1) >= 13 (T^N + 1), exact in integers.
  const std::uint64_t tn = level_index(T, N);
  const std::uint64_t tn1 = level_index(T, N + 1);
  return 2 * (tn1 + 1) >= 13 * (tn + 1);
}

double max_alignment_deviation(std::span<const Complex> alphas, std::uint64_t index,
                               std::size_t grid) {
  if (alphas.size() < index)
    throw std::invalid_argument("max_alignment_deviation: alphas must reach the index");
  const auto thetas = grid_thetas(grid);
  PhaseTrackBatch tracks(thetas);
  PhaseTrack reference = init_track(0.0);
  for (std::uint64_t m = 0; m < index; ++m) {
    tracks.step(alphas[m]);
    reference = phase_step(reference, alphas[m]);
  }
  // gamma_j(theta) - gamma_j(0) - (j+1) theta is an exact drift difference.
  double worst = 0.0;
  for (std::size_t i = 0; i < grid; ++i)
    worst = std::max(worst, std::abs(tracks.drift(i) - reference.drift));
  return worst;
}

}  // namespace opuc
