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

#include "opuc/prufer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "opuc/szego.hpp"

namespace opuc {

namespace {

void require_admissible(Complex alpha) {
  if (!(std::norm(alpha) < 1.0))
    throw std::invalid_argument("phase_step: |alpha| must be < 1");
}

}  // namespace

PhaseTrack init_track(double theta) {
  PhaseTrack t;
  t.theta = theta;
  return t;  // gamma_0 = theta, log = 0
}

PhaseTrack phase_step(const PhaseTrack& t, Complex alpha) {
  require_admissible(alpha);
  PhaseTrack out = t;
  out.n = t.n + 1;
  if (alpha.real() == 0.0 && alpha.imag() == 0.0) return out;  // w = 1 exactly
  const Complex w = Complex{1.0, 0.0} - alpha * std::polar(1.0, t.gamma());
  const double im_log = std::atan2(w.imag(), w.real());  // |.| < pi/2 since Re w > 0
  out.drift = t.drift - 2.0 * im_log;
  out.log_phi_star = t.log_phi_star + Complex{0.5 * std::log(std::norm(w)), im_log};
  return out;
}

PhaseTrack run_track(double theta, std::span<const Complex> alphas, std::uint64_t n) {
  if (n > alphas.size()) throw std::invalid_argument("run_track: n exceeds alpha count");
  PhaseTrack t = init_track(theta);
  for (std::uint64_t j = 0; j < n; ++j) t = phase_step(t, alphas[j]);
  return t;
}

double log_consistency_residual(std::span<const Complex> alphas, double theta,
                                std::uint64_t n) {
  const PhaseTrack t = run_track(theta, alphas, n);
  PointState s = init_state(std::polar(1.0, theta));
  for (std::uint64_t j = 0; j < n; ++j) s = step(s, alphas[j]);
  const Complex direct = s.phi_star;
  return std::abs(std::exp(t.log_phi_star) - direct) / std::abs(direct);
}

double alignment_deviation(std::span<const Complex> alphas, double theta, std::uint64_t j) {
  // gamma_j(theta) - gamma_j(0) - (j+1) theta = drift(theta) - drift(0)
  // exactly, in this representation.
  const PhaseTrack at_theta = run_track(theta, alphas, j);
  const PhaseTrack at_zero = run_track(0.0, alphas, j);
  return std::abs(at_theta.drift - at_zero.drift);
}

PhaseSum weighted_phase_sum(std::span<const Complex> alphas, double theta,
                            std::size_t from, std::size_t to) {
  if (from > to || to > alphas.size())
    throw std::invalid_argument("weighted_phase_sum: need from <= to <= alphas.size()");
  PhaseTrack t = init_track(theta);
  for (std::size_t m = 0; m < from; ++m) t = phase_step(t, alphas[m]);
  PhaseSum out;
  for (std::size_t m = from; m < to; ++m) {
    // Zero terms leave both the sum and the running max unchanged.
    if (alphas[m] != Complex{0.0, 0.0}) {
      out.total += alphas[m] * std::polar(1.0, t.gamma());
      out.running_max = std::max(out.running_max, std::abs(out.total));
    }
    t = phase_step(t, alphas[m]);
  }
  return out;
}

PhaseTrackBatch::PhaseTrackBatch(std::span<const double> thetas, bool keep_log)
    : keep_log_(keep_log),
      theta_(thetas.begin(), thetas.end()),
      drift_(thetas.size(), 0.0) {
  if (keep_log_) {
    log_re_.assign(theta_.size(), 0.0);
    log_im_.assign(theta_.size(), 0.0);
  }
}

void PhaseTrackBatch::step(Complex alpha) {
  require_admissible(alpha);
  if (alpha.real() == 0.0 && alpha.imag() == 0.0) {
    ++n_;  // whole batch advances for free
    return;
  }
  const double ar = alpha.real(), ai = alpha.imag();
  const double deg = static_cast<double>(n_ + 1);
  const std::size_t m = theta_.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double g = deg * theta_[i] + drift_[i];
    const double c = std::cos(g);
    const double s = std::sin(g);
    const double wr = 1.0 - (ar * c - ai * s);
    const double wi = -(ar * s + ai * c);
    const double im_log = std::atan2(wi, wr);
    drift_[i] -= 2.0 * im_log;
    if (keep_log_) {
      log_re_[i] += 0.5 * std::log(wr * wr + wi * wi);
      log_im_[i] += im_log;
    }
  }
  ++n_;
}

Complex PhaseTrackBatch::log_phi_star(std::size_t i) const {
  if (!keep_log_) throw std::logic_error("PhaseTrackBatch: log accumulation disabled");
  return {log_re_[i], log_im_[i]};
}

Complex PhaseTrackBatch::phase_factor(std::size_t i) const {
  return std::polar(1.0, gamma(i));
}

}  // namespace opuc
