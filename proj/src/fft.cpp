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

#include "opuc/fft.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace opuc {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fourier_transform(std::vector<std::complex<double>>& data, int sign) {
  const std::size_t n = data.size();
  if (!is_power_of_two(n)) throw std::invalid_argument("fourier_transform: length must be a power of two");
  if (sign != 1 && sign != -1) throw std::invalid_argument("fourier_transform: sign must be +1 or -1");
  if (n == 1) return;

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  // Twiddle table w[k] = e^(sign * 2 pi i k / n), k < n/2.
  std::vector<std::complex<double>> w(n / 2);
  const double step = static_cast<double>(sign) * kTwoPi / static_cast<double>(n);
  for (std::size_t k = 0; k < n / 2; ++k)
    w[k] = std::polar(1.0, step * static_cast<double>(k));

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t base = 0; base < n; base += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> t = w[k * stride] * data[base + k + len / 2];
        const std::complex<double> u = data[base + k];
        data[base + k] = u + t;
        data[base + k + len / 2] = u - t;
      }
    }
  }
}

std::vector<std::complex<double>> evaluate_on_roots(
    const std::vector<std::complex<double>>& coeffs, std::size_t M) {
  if (!is_power_of_two(M)) throw std::invalid_argument("evaluate_on_roots: M must be a power of two");
  if (M < coeffs.size()) throw std::invalid_argument("evaluate_on_roots: M smaller than coefficient count");
  std::vector<std::complex<double>> buf(M, std::complex<double>(0.0, 0.0));
  std::copy(coeffs.begin(), coeffs.end(), buf.begin());
  fourier_transform(buf, +1);
  return buf;
}

}  // namespace opuc
