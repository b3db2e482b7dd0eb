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
#include <span>
#include <vector>

#include "opuc/szego.hpp"

namespace opuc {

/// Phi*_n evaluated at all M-th roots of unity z_m = e^(2 pi i m / M).
struct GridEvaluation {
  std::size_t M = 0;
  std::uint64_t degree = 0;
  std::vector<Complex> values;
};

/// Exact discrete Fourier evaluation of the zero-padded phi_star coefficients.
/// Requires M a power of two with M >= 2 (n + 1).
GridEvaluation eval_grid(const CoeffPair& c, std::size_t M);

/// Two-sided certificate: grid_max <= true sup <= upper_bound, where
/// upper_bound = grid_max / (1 - pi n / M). Between grid points a degree-n
/// trigonometric polynomial moves at most (pi / M) n sup (Bernstein), which
/// gives the correction factor. Requires M > pi n.
struct CertifiedSup {
  std::uint64_t degree = 0;
  std::size_t M = 0;
  double grid_max = 0.0;
  double upper_bound = 0.0;
};

CertifiedSup certify_sup(const GridEvaluation& g);

inline constexpr std::uint64_t kCoeffDegreeBudget = 20000;

/// Runs the coefficient recursion across alphas and certifies the sup of
/// Phi*_n at each checkpoint degree, with M = next power of two >=
/// oversample * max(n, 1). Checkpoints beyond the degree budget are dropped
/// and `truncated` is set; the records gathered so far are still returned.
struct SupTrajectory {
  std::vector<CertifiedSup> records;
  bool truncated = false;
  std::uint64_t budget = kCoeffDegreeBudget;
};

SupTrajectory sup_trajectory(std::span<const Complex> alphas,
                             std::span<const std::uint64_t> checkpoints,
                             unsigned oversample,
                             std::uint64_t degree_budget = kCoeffDegreeBudget);

}  // namespace opuc
