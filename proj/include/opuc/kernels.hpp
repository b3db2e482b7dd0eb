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

#include <cstddef>

namespace opuc::kernels {

// Data-parallel inner loops of the recursion. Scalar reference versions are
// the semantic definition; the AVX2 versions are equivalence-tested against
// them (they may differ by FMA rounding only). Selection happens once at
// startup; OPUC_KERNEL=scalar|avx2 overrides.

struct Dispatch {
  const char* name;

  // One recursion step applied simultaneously to a batch of circle points,
  // same alpha on every lane, per-lane z (split re/im arrays):
  //   t    = z * phi
  //   phi' = t - conj(alpha) * phi_star
  //   ps'  = phi_star - alpha * t
  void (*point_step)(std::size_t n, const double* z_re, const double* z_im,
                     double* phi_re, double* phi_im, double* ps_re, double* ps_im,
                     double alpha_re, double alpha_im);

  // Coefficient-form step on interleaved complex buffers. Inputs hold n
  // coefficients (degree n-1); outputs hold n+1:
  //   phi_out[j] = phi[j-1] - conj(alpha) * ps[j]   (phi[-1] = 0, ps[n] = 0)
  //   ps_out[j]  = ps[j] - alpha * phi[j-1]
  // The exact boundary values phi_out[n] = phi[n-1] and ps_out[0] = ps[0] are
  // copied, keeping the monic and unit-constant-term invariants bit-exact.
  void (*coeff_step)(std::size_t n, const double* phi, const double* ps,
                     double* phi_out, double* ps_out, double alpha_re, double alpha_im);

  // max over j of re^2 + im^2 on an interleaved complex buffer of n entries.
  double (*max_abs2)(std::size_t n, const double* interleaved);
};

const Dispatch& scalar_kernels();

#if defined(OPUC_HAVE_AVX2_TU)
const Dispatch& avx2_kernels();
bool avx2_supported();
#endif

/// The runtime-selected table. Chosen once (thread-safe static init).
const Dispatch& active_kernels();

}  // namespace opuc::kernels
