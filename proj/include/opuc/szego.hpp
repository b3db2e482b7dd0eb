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

/// (Phi_n(z), Phi*_n(z)) at one circle point, advanced by the recursion
///   Phi_{n+1}  = z Phi_n - conj(alpha_n) Phi*_n
///   Phi*_{n+1} = Phi*_n - alpha_n z Phi_n
/// On |z| = 1 the two components keep equal modulus.
struct PointState {
  Complex z;
  std::uint64_t n = 0;
  Complex phi{1.0, 0.0};
  Complex phi_star{1.0, 0.0};
};

/// Degree-0 state at z; rejects |.|z| - 1| > 1e-12.
PointState init_state(Complex z);

/// One recursion step; rejects |alpha| >= 1.
PointState step(const PointState& s, Complex alpha);

/// Runs the recursion at z across all alphas, returning snapshots at the
/// requested degrees (sorted ascending, each <= alphas.size()).
std::vector<PointState> run_point(Complex z, std::span<const Complex> alphas,
                                  std::span<const std::uint64_t> snapshot_degrees);

/// Full coefficient vectors of Phi_n and Phi*_n, ascending powers, length
/// n + 1 each. Leading coefficient of phi is exactly 1 (monic) and the
/// constant coefficient of phi_star is exactly 1; the arrays stay mutual
/// conjugate-reversals of each other.
struct CoeffPair {
  std::uint64_t n = 0;
  std::vector<Complex> phi{Complex{1.0, 0.0}};
  std::vector<Complex> phi_star{Complex{1.0, 0.0}};

  static CoeffPair degree0() { return CoeffPair{}; }

  /// Horner evaluation of phi_star at z.
  Complex eval_phi_star(Complex z) const;
  Complex eval_phi(Complex z) const;
};

CoeffPair coeff_step(const CoeffPair& c, Complex alpha);

/// Kernel-backed step writing into `out` (buffers resized as needed); use for
/// long trajectories to avoid reallocating.
void coeff_step_into(const CoeffPair& in, Complex alpha, CoeffPair& out);

/// kappa_n = prod_{j<n} (1 - |alpha_j|^2)^(1/2) = ||Phi_n||_{L^2(dmu)},
/// accumulated in log space.
struct NormConstant {
  std::uint64_t n = 0;
  double kappa = 1.0;
};

NormConstant norm_constant(std::span<const Complex> alphas, std::uint64_t n);

/// A batch of circle points advanced in lockstep; the data-parallel hot loop.
/// Storage is split re/im so the kernel layer can vectorize.
class PointBatch {
 public:
  explicit PointBatch(std::span<const Complex> zs);

  void step(Complex alpha);
  std::size_t size() const { return z_re_.size(); }
  std::uint64_t degree() const { return n_; }
  Complex z(std::size_t i) const { return {z_re_[i], z_im_[i]}; }
  Complex phi(std::size_t i) const { return {phi_re_[i], phi_im_[i]}; }
  Complex phi_star(std::size_t i) const { return {ps_re_[i], ps_im_[i]}; }

 private:
  std::uint64_t n_ = 0;
  std::vector<double> z_re_, z_im_, phi_re_, phi_im_, ps_re_, ps_im_;
};

/// Gram matrix of the orthonormal polynomials phi_0..phi_n under the
/// Bernstein-Szego measure dtheta / (2 pi |phi_n|^2), by the M-point
/// trapezoid rule on the roots of unity. Dense row-major (n+1) x (n+1).
struct GramMatrix {
  std::size_t n = 0;
  std::vector<Complex> entries;

  Complex at(std::size_t j, std::size_t k) const { return entries[j * (n + 1) + k]; }
  double max_deviation_from_identity() const;
};

/// Test oracle: the truncated sequence (alphas, then zeros) makes phi_0..phi_n
/// exactly orthonormal for the Bernstein-Szego density above, so the Gram
/// matrix must be the identity up to quadrature error. Requires M a power of
/// two with M >= 8 (n + 1).
GramMatrix orthogonality_oracle(std::span<const Complex> alphas, std::size_t M);

/// (1/M) sum_m |Phi_n(z_m)|^2 / |phi_n(z_m)|^2: the quadrature route to
/// kappa_n^2, used to cross-check norm_constant.
double quadrature_norm_squared(std::span<const Complex> alphas, std::size_t M);

}  // namespace opuc
