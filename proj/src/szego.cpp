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

#include "opuc/szego.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "opuc/fft.hpp"
#include "opuc/kernels.hpp"

namespace opuc {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void require_admissible(Complex alpha) {
  if (!(std::norm(alpha) < 1.0))
    throw std::invalid_argument("szego step: |alpha| must be < 1");
}

}  // namespace

PointState init_state(Complex z) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12)
    throw std::invalid_argument("init_state: z must lie on the unit circle");
  PointState s;
  s.z = z;
  return s;
}

PointState step(const PointState& s, Complex alpha) {
  require_admissible(alpha);
  PointState out;
  out.z = s.z;
  out.n = s.n + 1;
  const Complex t = s.z * s.phi;
  out.phi = t - std::conj(alpha) * s.phi_star;
  out.phi_star = s.phi_star - alpha * t;
  return out;
}

std::vector<PointState> run_point(Complex z, std::span<const Complex> alphas,
                                  std::span<const std::uint64_t> snapshot_degrees) {
  for (std::size_t i = 1; i < snapshot_degrees.size(); ++i)
    if (snapshot_degrees[i] < snapshot_degrees[i - 1])
      throw std::invalid_argument("run_point: snapshot degrees must be sorted ascending");
  if (!snapshot_degrees.empty() && snapshot_degrees.back() > alphas.size())
    throw std::invalid_argument("run_point: snapshot degree exceeds alpha count");

  std::vector<PointState> out;
  out.reserve(snapshot_degrees.size());
  PointState s = init_state(z);
  std::size_t next = 0;
  while (next < snapshot_degrees.size() && snapshot_degrees[next] == 0) {
    out.push_back(s);
    ++next;
  }
  for (std::size_t j = 0; j < alphas.size() && next < snapshot_degrees.size(); ++j) {
    s = step(s, alphas[j]);
    while (next < snapshot_degrees.size() && snapshot_degrees[next] == s.n) {
      out.push_back(s);
      ++next;
    }
  }
  return out;
}

Complex CoeffPair::eval_phi_star(Complex z) const {
  Complex acc{0.0, 0.0};
  for (std::size_t j = phi_star.size(); j > 0; --j) acc = acc * z + phi_star[j - 1];
  return acc;
}

Complex CoeffPair::eval_phi(Complex z) const {
  Complex acc{0.0, 0.0};
  for (std::size_t j = phi.size(); j > 0; --j) acc = acc * z + phi[j - 1];
  return acc;
}

void coeff_step_into(const CoeffPair& in, Complex alpha, CoeffPair& out) {
  require_admissible(alpha);
  const std::size_t count = in.phi.size();  // n + 1 coefficients in
  out.n = in.n + 1;
  out.phi.resize(count + 1);
  out.phi_star.resize(count + 1);
  kernels::active_kernels().coeff_step(
      count, reinterpret_cast<const double*>(in.phi.data()),
      reinterpret_cast<const double*>(in.phi_star.data()),
      reinterpret_cast<double*>(out.phi.data()),
      reinterpret_cast<double*>(out.phi_star.data()), alpha.real(), alpha.imag());
}

CoeffPair coeff_step(const CoeffPair& c, Complex alpha) {
  CoeffPair out;
  coeff_step_into(c, alpha, out);
  return out;
}

NormConstant norm_constant(std::span<const Complex> alphas, std::uint64_t n) {
  if (n > alphas.size())
    throw std::invalid_argument("norm_constant: n exceeds alpha count");
  double log_k2 = 0.0;
  for (std::uint64_t j = 0; j < n; ++j) {
    const double m2 = std::norm(alphas[j]);
    if (!(m2 < 1.0)) throw std::invalid_argument("norm_constant: |alpha| must be < 1");
    log_k2 += std::log1p(-m2);
  }
  return {n, std::exp(0.5 * log_k2)};
}

PointBatch::PointBatch(std::span<const Complex> zs) {
  const std::size_t m = zs.size();
  z_re_.resize(m);
  z_im_.resize(m);
  phi_re_.assign(m, 1.0);
  phi_im_.assign(m, 0.0);
  ps_re_.assign(m, 1.0);
  ps_im_.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (std::abs(std::abs(zs[i]) - 1.0) > 1e-12)
      throw std::invalid_argument("PointBatch: points must lie on the unit circle");
    z_re_[i] = zs[i].real();
    z_im_[i] = zs[i].imag();
  }
}

void PointBatch::step(Complex alpha) {
  require_admissible(alpha);
  kernels::active_kernels().point_step(size(), z_re_.data(), z_im_.data(), phi_re_.data(),
                                       phi_im_.data(), ps_re_.data(), ps_im_.data(),
                                       alpha.real(), alpha.imag());
  ++n_;
}

double GramMatrix::max_deviation_from_identity() const {
  double worst = 0.0;
  for (std::size_t j = 0; j <= n; ++j)
    for (std::size_t k = 0; k <= n; ++k) {
      const Complex expected = (j == k) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
      worst = std::max(worst, std::abs(at(j, k) - expected));
    }
  return worst;
}

namespace {

std::vector<Complex> roots_of_unity(std::size_t M) {
  std::vector<Complex> zs(M);
  for (std::size_t m = 0; m < M; ++m)
    zs[m] = std::polar(1.0, kTwoPi * static_cast<double>(m) / static_cast<double>(M));
  return zs;
}

// phi_j(z_m) for all j <= n, m < M, row-major rows j. Orthonormal scaling.
std::vector<Complex> orthonormal_table(std::span<const Complex> alphas, std::size_t M) {
  const std::size_t n = alphas.size();
  const auto zs = roots_of_unity(M);
  PointBatch batch(zs);
  std::vector<Complex> table((n + 1) * M);
  double log_k2 = 0.0;
  for (std::size_t m = 0; m < M; ++m) table[m] = batch.phi(m);  // kappa_0 = 1
  for (std::size_t j = 0; j < n; ++j) {
    batch.step(alphas[j]);
    log_k2 += std::log1p(-std::norm(alphas[j]));
    const double inv_kappa = std::exp(-0.5 * log_k2);
    for (std::size_t m = 0; m < M; ++m) table[(j + 1) * M + m] = inv_kappa * batch.phi(m);
  }
  return table;
}

void require_oracle_grid(std::size_t n, std::size_t M) {
  if (!is_power_of_two(M))
    throw std::invalid_argument("orthogonality_oracle: M must be a power of two");
  if (M < 8 * (n + 1))
    throw std::invalid_argument("orthogonality_oracle: M must be >= 8 (n + 1)");
}

}  // namespace

GramMatrix orthogonality_oracle(std::span<const Complex> alphas, std::size_t M) {
  const std::size_t n = alphas.size();
  require_oracle_grid(n, M);
  const auto table = orthonormal_table(alphas, M);

  GramMatrix gram;
  gram.n = n;
  gram.entries.assign((n + 1) * (n + 1), Complex{0.0, 0.0});
  const double inv_M = 1.0 / static_cast<double>(M);
  for (std::size_t m = 0; m < M; ++m) {
    const double weight = inv_M / std::norm(table[n * M + m]);
    for (std::size_t j = 0; j <= n; ++j) {
      const Complex pj = table[j * M + m] * weight;
      for (std::size_t k = 0; k <= n; ++k)
        gram.entries[j * (n + 1) + k] += pj * std::conj(table[k * M + m]);
    }
  }
  return gram;
}

double quadrature_norm_squared(std::span<const Complex> alphas, std::size_t M) {
  const std::size_t n = alphas.size();
  require_oracle_grid(n, M);
  const auto zs = roots_of_unity(M);
  PointBatch batch(zs);
  CoeffPair coeffs = CoeffPair::degree0();
  CoeffPair scratch;
  for (const Complex& a : alphas) {
    batch.step(a);
    coeff_step_into(coeffs, a, scratch);
    std::swap(coeffs, scratch);
  }
  // Numerator |Phi_n|^2 from the point recursion; density from the
  // coefficient-form transform (|phi_n| = |Phi_n*| / kappa on the circle).
  // Two independent evaluation routes, so agreement with kappa_n^2 is a real
  // consistency statement rather than a pointwise identity.
  const auto star_values = evaluate_on_roots(coeffs.phi_star, M);
  const double kappa2 = std::pow(norm_constant(alphas, n).kappa, 2);
  double acc = 0.0;
  for (std::size_t m = 0; m < M; ++m)
    acc += std::norm(batch.phi(m)) * kappa2 / std::norm(star_values[m]);
  return acc / static_cast<double>(M);
}

}  // namespace opuc
