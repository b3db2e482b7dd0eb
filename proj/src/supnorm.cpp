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

#include "opuc/supnorm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "opuc/fft.hpp"
#include "opuc/kernels.hpp"

namespace opuc {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
}

GridEvaluation eval_grid(const CoeffPair& c, std::size_t M) {
  if (!is_power_of_two(M)) throw std::invalid_argument("eval_grid: M must be a power of two");
  if (M < 2 * (c.n + 1)) throw std::invalid_argument("eval_grid: M must be >= 2 (n + 1)");
  GridEvaluation g;
  g.M = M;
  g.degree = c.n;
  g.values = evaluate_on_roots(c.phi_star, M);
  return g;
}

CertifiedSup certify_sup(const GridEvaluation& g) {
  const double correction = kPi * static_cast<double>(g.degree) / static_cast<double>(g.M);
  if (!(correction < 1.0))
    throw std::invalid_argument("certify_sup: need M > pi n for a positive correction factor");
  CertifiedSup out;
  out.degree = g.degree;
  out.M = g.M;
  out.grid_max = std::sqrt(kernels::active_kernels().max_abs2(
      g.values.size(), reinterpret_cast<const double*>(g.values.data())));
  out.upper_bound = out.grid_max / (1.0 - correction);
  return out;
}

SupTrajectory sup_trajectory(std::span<const Complex> alphas,
                             std::span<const std::uint64_t> checkpoints,
                             unsigned oversample, std::uint64_t degree_budget) {
  if (oversample < 8) throw std::invalid_argument("sup_trajectory: oversample must be >= 8");
  for (std::size_t i = 1; i < checkpoints.size(); ++i)
    if (checkpoints[i] < checkpoints[i - 1])
      throw std::invalid_argument("sup_trajectory: checkpoints must be sorted ascending");
  if (!checkpoints.empty() && checkpoints.back() > alphas.size())
    throw std::invalid_argument("sup_trajectory: checkpoint exceeds alpha count");

  SupTrajectory out;
  out.budget = degree_budget;

  CoeffPair coeffs = CoeffPair::degree0();
  CoeffPair scratch;
  std::size_t next = 0;
  const auto emit = [&](std::uint64_t degree) {
    const std::size_t M = next_power_of_two(
        static_cast<std::size_t>(oversample) *
        static_cast<std::size_t>(std::max<std::uint64_t>(degree, 1)));
    out.records.push_back(certify_sup(eval_grid(coeffs, M)));
  };

  while (next < checkpoints.size() && checkpoints[next] == 0) {
    emit(0);
    ++next;
  }
  for (std::uint64_t j = 0; j < alphas.size() && next < checkpoints.size(); ++j) {
    if (j >= degree_budget) {
      out.truncated = true;
      return out;
    }
    coeff_step_into(coeffs, alphas[j], scratch);
    std::swap(coeffs, scratch);
    while (next < checkpoints.size() && checkpoints[next] == coeffs.n) {
      emit(coeffs.n);
      ++next;
    }
  }
  return out;
}

}  // namespace opuc
