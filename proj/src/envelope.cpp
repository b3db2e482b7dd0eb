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

#include "opuc/envelope.hpp"

#include <cmath>
#include <stdexcept>

namespace opuc {

namespace {

// Largest exponent m with T^m < limit (capped so T^m fits u64), as a loop to
// stay exact for all T >= 2.
std::uint64_t pow_u64_saturating(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / base)
      return std::numeric_limits<std::uint64_t>::max();
    r *= base;
  }
  return r;
}

}  // namespace

double slow_function_value(SlowFunction psi, std::uint64_t k) {
  switch (psi) {
    case SlowFunction::One: return 1.0;
    case SlowFunction::Log: return std::log(static_cast<double>(k + 2));
    case SlowFunction::LogLog: return std::log(std::log(static_cast<double>(k + 16)));
  }
  return 1.0;
}

std::string slow_function_name(SlowFunction psi) {
  switch (psi) {
    case SlowFunction::One: return "one";
    case SlowFunction::Log: return "log";
    case SlowFunction::LogLog: return "loglog";
  }
  return "one";
}

Envelope Envelope::zero() { return Envelope(); }

Envelope Envelope::power_decay(double exponent, double scale) {
  if (!(exponent > 0.5))
    throw std::invalid_argument("power_decay: exponent must exceed 1/2 (square-summability)");
  if (!(scale > 0.0 && scale < 1.0))
    throw std::invalid_argument("power_decay: scale must lie in (0, 1)");
  Envelope e;
  e.kind_ = EnvelopeKind::PowerDecay;
  e.exponent_ = exponent;
  e.scale_ = scale;
  return e;
}

Envelope Envelope::sparse_geometric(std::uint32_t T, double epsilon, SlowFunction psi) {
  if (T < 2) throw std::invalid_argument("sparse_geometric: T must be >= 2");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("sparse_geometric: epsilon must lie in (0, 1)");
  Envelope e;
  e.kind_ = EnvelopeKind::SparseGeometric;
  e.sparse_base_ = T;
  e.epsilon_ = epsilon;
  e.psi_ = psi;
  return e;
}

Envelope Envelope::explicit_values(std::vector<double> values) {
  for (double v : values)
    if (!(std::abs(v) < 1.0))
      throw std::invalid_argument("explicit_values: every |a_n| must be < 1");
  Envelope e;
  e.kind_ = EnvelopeKind::Explicit;
  e.values_ = std::move(values);
  return e;
}

Envelope Envelope::geometric_decay(double ratio, double scale) {
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::invalid_argument("geometric_decay: ratio must lie in (0, 1)");
  if (!(scale > 0.0 && scale < 1.0))
    throw std::invalid_argument("geometric_decay: scale must lie in (0, 1)");
  Envelope e;
  e.kind_ = EnvelopeKind::GeometricDecay;
  e.ratio_ = ratio;
  e.scale_ = scale;
  return e;
}

double Envelope::a(std::uint64_t n) const {
  switch (kind_) {
    case EnvelopeKind::Zero:
      return 0.0;
    case EnvelopeKind::PowerDecay:
      return scale_ * std::pow(static_cast<double>(n + 2), -exponent_);
    case EnvelopeKind::Explicit:
      return n < values_.size() ? values_[n] : 0.0;
    case EnvelopeKind::GeometricDecay:
      return scale_ * std::pow(ratio_, static_cast<double>(n));
    case EnvelopeKind::SparseGeometric: {
      // Nonzero exactly at n = T^k, k >= 2.
      const std::uint64_t T = sparse_base_;
      if (n < T * T) return 0.0;
      std::uint64_t m = n, k = 0;
      while (m % T == 0) {
        m /= T;
        ++k;
      }
      if (m != 1 || k < 2) return 0.0;
      return epsilon_ / (static_cast<double>(k) * slow_function_value(psi_, k));
    }
  }
  return 0.0;
}

std::uint64_t Envelope::next_nonzero(std::uint64_t n) const {
  switch (kind_) {
    case EnvelopeKind::Zero:
      return npos;
    case EnvelopeKind::PowerDecay:
    case EnvelopeKind::GeometricDecay:
      return n;
    case EnvelopeKind::Explicit: {
      for (std::uint64_t m = n; m < values_.size(); ++m)
        if (values_[m] != 0.0) return m;
      return npos;
    }
    case EnvelopeKind::SparseGeometric: {
      const std::uint64_t T = sparse_base_;
      std::uint64_t p = T * T;  // first support point, k = 2
      while (p < n) {
        if (p > std::numeric_limits<std::uint64_t>::max() / T) return npos;
        p *= T;
      }
      return p;
    }
  }
  return npos;
}

TailEnergy tail_energy(const Envelope& env, std::uint64_t k, std::uint64_t horizon) {
  if (horizon < k) throw std::invalid_argument("tail_energy: horizon must be >= k");
  TailEnergy out;
  out.k = k;

  switch (env.kind()) {
    case EnvelopeKind::Zero:
      return out;

    case EnvelopeKind::Explicit: {
      const auto& v = env.values();
      double s = 0.0;
      for (std::uint64_t m = v.size(); m > k; --m) s += v[m - 1] * v[m - 1];
      out.value = s;
      return out;
    }

    case EnvelopeKind::GeometricDecay: {
      // sum_{n>=k} c^2 r^(2n) = c^2 r^(2k) / (1 - r^2)
      const double r2 = env.ratio() * env.ratio();
      out.value = env.scale() * env.scale() *
                  std::pow(env.ratio(), 2.0 * static_cast<double>(k)) / (1.0 - r2);
      return out;
    }

    case EnvelopeKind::PowerDecay: {
      double s = 0.0;
      for (std::uint64_t m = horizon; m > k; --m) {
        const double a = env.a(m - 1);
        s += a * a;
      }
      out.value = s;
      out.method = TailMethod::PartialSum;
      out.horizon = horizon;
      // sum_{m>=H} f(m) <= int_{H-1}^inf f(x) dx for decreasing f
      const double p = env.exponent();
      const double c = env.scale();
      out.remainder_bound = c * c *
                            std::pow(static_cast<double>(horizon + 1), 1.0 - 2.0 * p) /
                            (2.0 * p - 1.0);
      return out;
    }

    case EnvelopeKind::SparseGeometric: {
      const std::uint64_t T = env.sparse_base();
      // Terms live at T^m, m >= 2; collect exponents with k <= T^m < horizon.
      std::uint64_t first_m = 2;
      while (pow_u64_saturating(T, first_m) < k) ++first_m;
      std::uint64_t last_m = first_m;
      while (pow_u64_saturating(T, last_m) < horizon) ++last_m;
      double s = 0.0;
      for (std::uint64_t m = last_m; m > first_m; --m) {
        const double a = env.epsilon() /
                         (static_cast<double>(m - 1) * slow_function_value(env.psi(), m - 1));
        s += a * a;
      }
      out.value = s;
      out.method = TailMethod::PartialSum;
      out.horizon = horizon;
      // sum_{m>=M} eps^2/(m psi(m))^2 <= eps^2 sum_{m>=M} 1/m^2 <= eps^2/(M-1),
      // valid since psi >= 1 on the support.
      const double M = static_cast<double>(last_m);
      out.remainder_bound = env.epsilon() * env.epsilon() / std::max(1.0, M - 1.0);
      return out;
    }
  }
  return out;
}

std::vector<double> tail_energy_table(const Envelope& env, std::uint64_t n_max,
                                      std::uint64_t horizon) {
  std::vector<double> table(n_max + 1, 0.0);
  switch (env.kind()) {
    case EnvelopeKind::Zero:
      return table;
    case EnvelopeKind::Explicit:
    case EnvelopeKind::GeometricDecay: {
      for (std::uint64_t n = 0; n <= n_max; ++n) table[n] = tail_energy(env, n, horizon).value;
      return table;
    }
    case EnvelopeKind::PowerDecay: {
      if (horizon < n_max) throw std::invalid_argument("tail_energy_table: horizon < n_max");
      double s = 0.0;
      std::uint64_t m = horizon;
      for (; m > n_max; --m) {
        const double a = env.a(m - 1);
        s += a * a;
      }
      for (std::uint64_t n = n_max;; --n) {
        table[n] = s;
        if (n == 0) break;
        const double a = env.a(n - 1);
        s += a * a;
      }
      return table;
    }
    case EnvelopeKind::SparseGeometric: {
      // Suffix sums are constant between support points; reuse tail_energy at
      // each support boundary, walking downward.
      for (std::uint64_t n = 0; n <= n_max; ++n) table[n] = tail_energy(env, n, horizon).value;
      return table;
    }
  }
  return table;
}

double steklov_series_partial(const Envelope& env, std::uint64_t N) {
  if (N < 2) throw std::invalid_argument("steklov_series_partial: N must be >= 2");
  const std::uint64_t horizon = env.finite_support() ? N + 1 : 4 * N;
  const std::vector<double> R = tail_energy_table(env, N, std::max(horizon, N));
  double s = 0.0;
  for (std::uint64_t n = 2; n <= N; ++n) {
    if (R[n] == 0.0) continue;
    s += std::sqrt(R[n]) /
         (static_cast<double>(n) * std::sqrt(std::log(static_cast<double>(n))));
  }
  return s;
}

double condensed_series_partial(const Envelope& env, std::uint32_t K) {
  if (K > 4)
    throw std::invalid_argument(
        "condensed_series_partial: K > 4 exceeds the desk-scale budget (2^(2^K) blocks)");
  double s = 0.0;
  for (std::uint32_t j = 0; j <= K; ++j) {
    const std::uint64_t G = 1ull << (1ull << j);  // 2^(2^j)
    const std::uint64_t horizon = std::max<std::uint64_t>(kDefaultTailHorizon, 4 * G);
    const double R = tail_energy(env, G, horizon).value;
    s += std::sqrt(static_cast<double>(1ull << j) * R);
  }
  return s;
}

std::vector<std::complex<double>> sample_parameters(const Envelope& env,
                                                    const Randomizer& randomizer,
                                                    std::uint64_t trajectory, std::size_t n) {
  std::vector<std::complex<double>> alphas(n, std::complex<double>(0.0, 0.0));
  OmegaStream stream(randomizer, trajectory);
  // Counter-based draws are index-addressed, so skipping the zero gaps does
  // not perturb the remaining draws.
  std::uint64_t j = env.next_nonzero(0);
  while (j < n) {
    alphas[j] = env.a(j) * stream.omega(j);
    if (j + 1 >= n) break;
    j = env.next_nonzero(j + 1);
  }
  return alphas;
}

}  // namespace opuc
