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

#include "opuc/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace opuc {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline void philox_round(std::uint32_t ctr[4], std::uint32_t k0, std::uint32_t k1) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  ctr[0] = hi1 ^ ctr[1] ^ k0;
  ctr[1] = lo1;
  ctr[2] = hi0 ^ ctr[3] ^ k1;
  ctr[3] = lo0;
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

PhiloxStream::PhiloxStream(std::uint64_t seed, std::uint64_t stream) {
  // Substream key = hash(seed, stream); distinct streams decorrelate by key.
  const std::uint64_t key = splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x9E3779B97F4A7C15ull));
  key0_ = static_cast<std::uint32_t>(key);
  key1_ = static_cast<std::uint32_t>(key >> 32);
}

std::array<std::uint32_t, 4> PhiloxStream::block(std::uint64_t counter) const {
  std::uint32_t ctr[4] = {static_cast<std::uint32_t>(counter),
                          static_cast<std::uint32_t>(counter >> 32), 0u, 0u};
  std::uint32_t k0 = key0_, k1 = key1_;
  for (int round = 0; round < 10; ++round) {
    philox_round(ctr, k0, k1);
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return {ctr[0], ctr[1], ctr[2], ctr[3]};
}

std::uint64_t PhiloxStream::bits64(std::uint64_t counter, unsigned lane) const {
  const auto b = block(counter);
  const unsigned base = (lane & 1u) * 2u;
  return (static_cast<std::uint64_t>(b[base + 1]) << 32) | b[base];
}

double PhiloxStream::uniform01(std::uint64_t counter, unsigned lane) const {
  return static_cast<double>(bits64(counter, lane) >> 11) * 0x1.0p-53;
}

Randomizer Randomizer::uniform_phase(std::uint64_t seed) {
  return Randomizer(MultiplierKind::UniformPhase, 1.0, seed);
}

Randomizer Randomizer::rademacher(std::uint64_t seed) {
  return Randomizer(MultiplierKind::Rademacher, 1.0, seed);
}

Randomizer Randomizer::scaled_uniform_phase(double radius, std::uint64_t seed) {
  if (!(radius > 0.0 && radius <= 1.0))
    throw std::invalid_argument("scaled_uniform_phase: radius must lie in (0, 1]");
  return Randomizer(MultiplierKind::ScaledUniformPhase, radius, seed);
}

std::string Randomizer::kind_name() const {
  switch (kind_) {
    case MultiplierKind::UniformPhase: return "uniform_phase";
    case MultiplierKind::Rademacher: return "rademacher";
    case MultiplierKind::ScaledUniformPhase: return "scaled_uniform_phase";
  }
  return "unknown";
}

std::complex<double> Randomizer::omega(std::uint64_t trajectory, std::uint64_t n) const {
  return OmegaStream(*this, trajectory).omega(n);
}

OmegaStream::OmegaStream(const Randomizer& randomizer, std::uint64_t trajectory)
    : stream_(randomizer.seed(), trajectory),
      kind_(randomizer.kind()),
      radius_(randomizer.radius()) {}

std::complex<double> OmegaStream::omega(std::uint64_t n) const {
  switch (kind_) {
    case MultiplierKind::Rademacher:
      return {(stream_.bits64(n) & 1ull) ? -1.0 : 1.0, 0.0};
    case MultiplierKind::UniformPhase: {
      const double u = kTwoPi * stream_.uniform01(n);
      return {std::cos(u), std::sin(u)};
    }
    case MultiplierKind::ScaledUniformPhase: {
      const double u = kTwoPi * stream_.uniform01(n);
      return {radius_ * std::cos(u), radius_ * std::sin(u)};
    }
  }
  return {0.0, 0.0};
}

}  // namespace opuc
