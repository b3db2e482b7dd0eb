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

/// Unwrapped phase gamma_n(theta) of z Phi_n / Phi*_n at z = e^(i theta),
/// together with the accumulated logarithm of Phi*_n.
///
/// The recursion, with w = 1 - alpha e^(i gamma):
///   gamma'        = gamma + theta - 2 Im Log w
///   log_phi_star' = log_phi_star + Log w
/// Re(w) > 0 whenever |alpha| < 1, so the principal Log per term is always
/// branch-safe; winding accumulates only through the additive gamma, which is
/// kept unwrapped and never reduced mod 2 pi.
///
/// Internally gamma_n = (n+1) theta + drift_n, where the drift collects the
/// -2 Im Log w corrections. Free steps (alpha = 0) leave the drift untouched,
/// so the free-rotation law gamma_n = (n+1) theta holds exactly, and phase
/// differences across theta reduce to exact drift differences.
struct PhaseTrack {
  double theta = 0.0;
  std::uint64_t n = 0;
  double drift = 0.0;
  Complex log_phi_star{0.0, 0.0};

  double gamma() const { return static_cast<double>(n + 1) * theta + drift; }
};

PhaseTrack init_track(double theta);

PhaseTrack phase_step(const PhaseTrack& t, Complex alpha);

/// Advances a track through alphas[0..n).
PhaseTrack run_track(double theta, std::span<const Complex> alphas, std::uint64_t n);

/// |exp(log_phi_star) - Phi*_n(e^(i theta))| / |Phi*_n(e^(i theta))|,
/// comparing the phase-track accumulation against the direct recursion.
double log_consistency_residual(std::span<const Complex> alphas, double theta,
                                std::uint64_t n);

/// |gamma_j(theta) - gamma_j(0) - (j+1) theta| from two parallel tracks.
double alignment_deviation(std::span<const Complex> alphas, double theta, std::uint64_t j);

struct PhaseSum {
  Complex total{0.0, 0.0};
  double running_max = 0.0;  // max over partial sums of the modulus
};

/// sum_{m=from}^{to-1} alpha_m e^(i gamma_m(theta)), plus the running maximum
/// of the partial-sum modulus.
PhaseSum weighted_phase_sum(std::span<const Complex> alphas, double theta,
                            std::size_t from, std::size_t to);

/// Many theta tracks advanced in lockstep. Zero-alpha steps cost O(1) for the
/// whole batch, which makes sparse ensembles cheap on dense theta grids.
class PhaseTrackBatch {
 public:
  explicit PhaseTrackBatch(std::span<const double> thetas, bool keep_log = false);

  void step(Complex alpha);
  std::uint64_t degree() const { return n_; }
  std::size_t size() const { return theta_.size(); }
  double theta(std::size_t i) const { return theta_[i]; }
  double gamma(std::size_t i) const {
    return static_cast<double>(n_ + 1) * theta_[i] + drift_[i];
  }
  double drift(std::size_t i) const { return drift_[i]; }
  Complex log_phi_star(std::size_t i) const;
  Complex phase_factor(std::size_t i) const;  // e^(i gamma_i)

 private:
  std::uint64_t n_ = 0;
  bool keep_log_ = false;
  std::vector<double> theta_, drift_, log_re_, log_im_;
};

}  // namespace opuc
