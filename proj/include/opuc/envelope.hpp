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
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "opuc/rng.hpp"

namespace opuc {

enum class EnvelopeKind { Zero, PowerDecay, SparseGeometric, Explicit, GeometricDecay };

/// Named slow functions psi for the sparse construction. All are
/// nondecreasing and >= 1 on the index range k >= 2.
enum class SlowFunction { One, Log, LogLog };

double slow_function_value(SlowFunction psi, std::uint64_t k);
std::string slow_function_name(SlowFunction psi);

/// Deterministic coefficient envelope {a_n}, |a_n| < 1, square-summable.
///
///   Zero             a_n = 0
///   PowerDecay       a_n = scale / (n + 2)^exponent, exponent > 1/2
///   SparseGeometric  a_{T^k} = epsilon / (k psi(k)) for k >= 2, else 0
///   Explicit         finite list, 0 beyond it
///   GeometricDecay   a_n = scale * ratio^n
class Envelope {
 public:
  static Envelope zero();
  static Envelope power_decay(double exponent, double scale);
  static Envelope sparse_geometric(std::uint32_t T, double epsilon, SlowFunction psi);
  static Envelope explicit_values(std::vector<double> values);
  static Envelope geometric_decay(double ratio, double scale);

  double a(std::uint64_t n) const;

  EnvelopeKind kind() const { return kind_; }
  double exponent() const { return exponent_; }
  double scale() const { return scale_; }
  std::uint32_t sparse_base() const { return sparse_base_; }
  double epsilon() const { return epsilon_; }
  SlowFunction psi() const { return psi_; }
  const std::vector<double>& values() const { return values_; }
  double ratio() const { return ratio_; }

  bool finite_support() const {
    return kind_ == EnvelopeKind::Zero || kind_ == EnvelopeKind::Explicit;
  }

  static constexpr std::uint64_t npos = std::numeric_limits<std::uint64_t>::max();

  /// Smallest index m >= n with a(m) != 0, or npos. Lets sparse ensembles be
  /// traversed without touching the zero gaps.
  std::uint64_t next_nonzero(std::uint64_t n) const;

 private:
  Envelope() = default;
  EnvelopeKind kind_ = EnvelopeKind::Zero;
  double exponent_ = 0.0;
  double scale_ = 0.0;
  std::uint32_t sparse_base_ = 0;
  double epsilon_ = 0.0;
  SlowFunction psi_ = SlowFunction::One;
  std::vector<double> values_;
  double ratio_ = 0.0;
};

enum class TailMethod { ClosedForm, PartialSum };

/// R_k = sum_{n>=k} a_n^2. For PartialSum the value is the sum over
/// [k, horizon) and remainder_bound dominates the dropped tail
/// (integral comparison).
struct TailEnergy {
  std::uint64_t k = 0;
  double value = 0.0;
  TailMethod method = TailMethod::ClosedForm;
  std::uint64_t horizon = 0;       // 0 when closed form
  double remainder_bound = 0.0;    // 0 when closed form
};

inline constexpr std::uint64_t kDefaultTailHorizon = 1ull << 20;

TailEnergy tail_energy(const Envelope& env, std::uint64_t k,
                       std::uint64_t horizon = kDefaultTailHorizon);

/// Table of tail energies R_n for n = 0..n_max, all at the same horizon.
/// Bit-identical to per-index tail_energy() calls (same summation order).
std::vector<double> tail_energy_table(const Envelope& env, std::uint64_t n_max,
                                      std::uint64_t horizon);

/// sum_{n=2}^{N} sqrt(R_n) / (n sqrt(log n)) with R_n at horizon 4N.
/// The series is the decay condition of the boundedness theorem; partial sums
/// are monotone nondecreasing in N.
double steklov_series_partial(const Envelope& env, std::uint64_t N);

/// sum_{j=0}^{K} sqrt(2^j R_{G(j)}) with G(j) = 2^(2^j); the condensed form of
/// the same series. K <= 4 at the desk-scale budget.
double condensed_series_partial(const Envelope& env, std::uint32_t K);

/// alpha_j = a_j * omega_j for j < n on the given trajectory substream.
std::vector<std::complex<double>> sample_parameters(const Envelope& env,
                                                    const Randomizer& randomizer,
                                                    std::uint64_t trajectory,
                                                    std::size_t n);

}  // namespace opuc
