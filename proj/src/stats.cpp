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

#include "opuc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "opuc/parallel.hpp"
#include "opuc/prufer.hpp"
#include "opuc/szego.hpp"

namespace opuc {

namespace {

constexpr double kLog2 = 0.69314718055994530941723212146;
constexpr std::uint64_t kTrialBlock = 1024;  // fixed merge granularity

double sample_stderr(double sum, double sum_sq, std::uint64_t n) {
  const double nn = static_cast<double>(n);
  const double var = std::max(0.0, (sum_sq - sum * sum / nn) / (nn - 1.0));
  return std::sqrt(var / nn);
}

}  // namespace

BlockSpec g_lattice(std::uint32_t k, std::uint64_t max_hi) {
  if (k >= 5)
    throw std::overflow_error("g_lattice: G(k+1) = 2^(2^(k+1)) overflows 64-bit indices");
  BlockSpec b;
  b.k = k;
  b.lo = 1ull << (1ull << k);
  b.hi = 1ull << (1ull << (k + 1));
  if (b.hi > max_hi)
    throw std::invalid_argument("g_lattice: block exceeds the desk-scale budget");
  return b;
}

double lambda_threshold(const Envelope& env, std::uint32_t k) {
  if (k > 3) throw std::invalid_argument("lambda_threshold: k <= 3 at the default budget");
  const std::uint64_t lo = 1ull << (1ull << k);
  const double log_g_next = static_cast<double>(1ull << (k + 1)) * kLog2;
  const double tail = tail_energy(env, lo).value;
  return 3.0 * std::sqrt(log_g_next * tail);
}

BlockSums block_sum_pair(std::span<const Complex> alphas, double theta, const BlockSpec& b) {
  if (alphas.size() <= b.hi)
    throw std::invalid_argument("block_sum_pair: alphas must cover the block endpoint hi");
  const PhaseSum ws = weighted_phase_sum(alphas, theta, b.lo, b.hi + 1);
  BlockSums out;
  out.a_sum = ws.total;
  out.running_max_a = ws.running_max;
  for (std::uint64_t m = b.lo; m <= b.hi; ++m) out.b_sum += alphas[m];
  return out;
}

MomentReport moment_compare(const Envelope& env, const Randomizer& randomizer,
                            const BlockSpec& b, double theta, unsigned p,
                            std::uint64_t trials) {
  if (p != 2 && p != 4) throw std::invalid_argument("moment_compare: p must be 2 or 4");
  if (trials < 1000) throw std::invalid_argument("moment_compare: trials must be >= 1000");

  const std::uint64_t nblocks = (trials + kTrialBlock - 1) / kTrialBlock;
  struct Partial {
    double a = 0.0, a2 = 0.0, bm = 0.0, b2 = 0.0;
  };
  std::vector<Partial> partials(nblocks);

  parallel_blocks(trials, kTrialBlock, [&](std::uint64_t blk, std::uint64_t lo, std::uint64_t hi) {
    Partial acc;
    for (std::uint64_t t = lo; t < hi; ++t) {
      const auto alphas = sample_parameters(env, randomizer, t, b.hi + 1);
      const BlockSums sums = block_sum_pair(alphas, theta, b);
      const double a2 = std::norm(sums.a_sum);
      const double b2 = std::norm(sums.b_sum);
      const double av = (p == 2) ? a2 : a2 * a2;
      const double bv = (p == 2) ? b2 : b2 * b2;
      acc.a += av;
      acc.a2 += av * av;
      acc.bm += bv;
      acc.b2 += bv * bv;
    }
    partials[blk] = acc;
  });

  Partial total;
  for (const Partial& q : partials) {
    total.a += q.a;
    total.a2 += q.a2;
    total.bm += q.bm;
    total.b2 += q.b2;
  }

  MomentReport report;
  report.k = b.k;
  report.p = p;
  report.trials = trials;
  report.a_moment = total.a / static_cast<double>(trials);
  report.b_moment = total.bm / static_cast<double>(trials);
  report.a_stderr = sample_stderr(total.a, total.a2, trials);
  report.b_stderr = sample_stderr(total.bm, total.b2, trials);
  for (std::uint64_t m = b.lo; m <= b.hi; ++m) {
    const double a = env.a(m);
    report.block_energy += a * a;
  }
  return report;
}

MartingaleResult martingale_residual(std::span<const Complex> prefix, Complex z,
                                     std::uint64_t j, const Envelope& env,
                                     const Randomizer& randomizer, std::uint64_t trials) {
  const std::uint64_t n = prefix.size();
  if (j <= n) throw std::invalid_argument("martingale_residual: j must exceed the prefix length");
  if (trials < 10000) throw std::invalid_argument("martingale_residual: trials must be >= 10^4");

  PointState base = init_state(z);
  for (const Complex& a : prefix) base = step(base, a);

  const std::uint64_t nblocks = (trials + kTrialBlock - 1) / kTrialBlock;
  struct Partial {
    double re = 0.0, im = 0.0, re2 = 0.0, im2 = 0.0;
  };
  std::vector<Partial> partials(nblocks);

  // Accumulate deviations Phi*_j - Phi*_n rather than Phi*_j itself: the
  // cancellation happens per sample, so a pathwise-constant tail (zero
  // envelope) yields a residual of exactly zero.
  parallel_blocks(trials, kTrialBlock, [&](std::uint64_t blk, std::uint64_t lo, std::uint64_t hi) {
    Partial acc;
    for (std::uint64_t t = lo; t < hi; ++t) {
      OmegaStream stream(randomizer, t);
      PointState s = base;
      for (std::uint64_t m = n; m < j; ++m) {
        const double a = env.a(m);
        s = step(s, a == 0.0 ? Complex{0.0, 0.0} : a * stream.omega(m));
      }
      const Complex dev = s.phi_star - base.phi_star;
      acc.re += dev.real();
      acc.im += dev.imag();
      acc.re2 += dev.real() * dev.real();
      acc.im2 += dev.imag() * dev.imag();
    }
    partials[blk] = acc;
  });

  Partial total;
  for (const Partial& q : partials) {
    total.re += q.re;
    total.im += q.im;
    total.re2 += q.re2;
    total.im2 += q.im2;
  }

  const double nn = static_cast<double>(trials);
  MartingaleResult out;
  out.trials = trials;
  out.reference = base.phi_star;
  const Complex mean_dev{total.re / nn, total.im / nn};
  out.tail_mean = base.phi_star + mean_dev;
  out.residual = std::abs(mean_dev);
  const double se_re = sample_stderr(total.re, total.re2, trials);
  const double se_im = sample_stderr(total.im, total.im2, trials);
  out.stderr_value = std::sqrt(se_re * se_re + se_im * se_im);
  return out;
}

LatticeReport lattice_diagnostic(const Envelope& env, const Randomizer& randomizer,
                                 std::uint32_t k, std::size_t theta_count,
                                 std::uint32_t repeats) {
  if (k > 3) throw std::invalid_argument("lattice_diagnostic: k <= 3 at the default budget");
  if (repeats == 0) throw std::invalid_argument("lattice_diagnostic: repeats must be positive");
  const BlockSpec b = g_lattice(k);
  if (theta_count == 0 || theta_count > b.hi)
    throw std::invalid_argument("lattice_diagnostic: need 0 < theta_count <= G(k+1)");

  const double lambda = lambda_threshold(env, k);

  std::vector<double> thetas(theta_count);
  for (std::size_t i = 0; i < theta_count; ++i)
    thetas[i] = 2.0 * 3.14159265358979323846264338328 * static_cast<double>(i) /
                static_cast<double>(theta_count);

  std::vector<std::uint8_t> exceeded(repeats, 0);
  parallel_blocks(repeats, 1, [&](std::uint64_t blk, std::uint64_t lo, std::uint64_t) {
    (void)blk;
    const std::uint64_t r = lo;
    const auto alphas = sample_parameters(env, randomizer, r, b.hi + 1);
    PhaseTrackBatch tracks(thetas);
    for (std::uint64_t m = 0; m < b.lo; ++m) tracks.step(alphas[m]);
    std::vector<Complex> partial(theta_count, Complex{0.0, 0.0});
    bool hit = false;
    for (std::uint64_t m = b.lo; m <= b.hi && !hit; ++m) {
      if (alphas[m] != Complex{0.0, 0.0}) {
        for (std::size_t i = 0; i < theta_count; ++i) {
          partial[i] += alphas[m] * tracks.phase_factor(i);
          // Strict exceedance: the degenerate lambda = 0 case (empty or zero
          // blocks) must not register as an event.
          if (std::abs(partial[i]) > lambda) {
            hit = true;
            break;
          }
        }
      }
      if (m < b.hi) tracks.step(alphas[m]);
    }
    exceeded[r] = hit ? 1 : 0;
  });

  std::uint32_t count = 0;
  for (std::uint8_t e : exceeded) count += e;

  LatticeReport report;
  report.k = k;
  report.lambda = lambda;
  report.repeats = repeats;
  report.theta_count = theta_count;
  report.exceed_fraction = static_cast<double>(count) / static_cast<double>(repeats);
  report.bound = std::exp(-static_cast<double>(1ull << k) * kLog2);
  report.binomial_stderr = std::sqrt(report.exceed_fraction * (1.0 - report.exceed_fraction) /
                                     static_cast<double>(repeats));
  return report;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_threshold(std::size_t n, std::size_t m, double alpha) {
  const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
  return c * std::sqrt(static_cast<double>(n + m) /
                       (static_cast<double>(n) * static_cast<double>(m)));
}

}  // namespace opuc
