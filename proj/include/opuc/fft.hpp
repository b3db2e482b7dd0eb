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
#include <cstddef>
#include <vector>

namespace opuc {

/// In-place radix-2 transform, power-of-two length.
///   sign = +1:  X[m] = sum_j x[j] e^(+2 pi i j m / N)   (no scaling)
///   sign = -1:  X[m] = sum_j x[j] e^(-2 pi i j m / N)   (no scaling)
/// Twiddles come from a direct std::polar table, so the rounding error stays
/// O(eps log N) rather than the O(eps N) of incrementally multiplied twiddles.
void fourier_transform(std::vector<std::complex<double>>& data, int sign);

/// Values p(z_m) of the polynomial with the given ascending coefficients at
/// all M-th roots of unity z_m = e^(2 pi i m / M); zero-pads to M.
std::vector<std::complex<double>> evaluate_on_roots(
    const std::vector<std::complex<double>>& coeffs, std::size_t M);

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n);

}  // namespace opuc
