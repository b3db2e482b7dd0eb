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

#include <array>
#include <complex>
#include <cstdint>
#include <string>

namespace opuc {

/// Philox4x32-10 (Salmon et al., SC 2011), keyed per (seed, stream).
/// Counter-based: the n-th 128-bit block is a pure function of
/// (seed, stream, n), so streams can be sampled out of order and in
/// parallel without coordination.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream);

  std::array<std::uint32_t, 4> block(std::uint64_t counter) const;

  /// 64 random bits from lane 0 or 1 of the counter-th block.
  std::uint64_t bits64(std::uint64_t counter, unsigned lane = 0) const;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01(std::uint64_t counter, unsigned lane = 0) const;

 private:
  std::uint32_t key0_, key1_;
};

enum class MultiplierKind { UniformPhase, Rademacher, ScaledUniformPhase };

/// Specification of the i.i.d. multiplier ensemble {omega_n}: |omega_n| <= 1,
/// E[omega_n] = 0. UniformPhase and ScaledUniformPhase are rotationally
/// symmetric in C; Rademacher is sign-symmetric on the real line only, which
/// places it outside the rotational-symmetry hypothesis of the boundedness
/// theorem (see rotationally_symmetric()).
class Randomizer {
 public:
  static Randomizer uniform_phase(std::uint64_t seed);
  static Randomizer rademacher(std::uint64_t seed);
  static Randomizer scaled_uniform_phase(double radius, std::uint64_t seed);

  MultiplierKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  double radius() const { return radius_; }
  bool rotationally_symmetric() const { return kind_ != MultiplierKind::Rademacher; }
  std::string kind_name() const;

  /// omega_n on the given trajectory substream. Pure function of
  /// (seed, trajectory, n); identical inputs give bit-identical values.
  std::complex<double> omega(std::uint64_t trajectory, std::uint64_t n) const;

 private:
  Randomizer(MultiplierKind kind, double radius, std::uint64_t seed)
      : kind_(kind), radius_(radius), seed_(seed) {}
  MultiplierKind kind_;
  double radius_;
  std::uint64_t seed_;
};

/// Trajectory-bound view of a Randomizer; holds the derived Philox key so the
/// per-draw cost is one block evaluation.
class OmegaStream {
 public:
  OmegaStream(const Randomizer& randomizer, std::uint64_t trajectory);
  std::complex<double> omega(std::uint64_t n) const;

 private:
  PhiloxStream stream_;
  MultiplierKind kind_;
  double radius_;
};

}  // namespace opuc
