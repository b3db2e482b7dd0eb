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

// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher.

#include "opuc/kernels.hpp"

#include <immintrin.h>

#include <algorithm>

namespace opuc::kernels {

namespace {

// Complex product of two interleaved pairs [re0 im0 re1 im1] by the broadcast
// scalar (ar, ai): fmaddsub gives [ar*vr - ai*vi, ar*vi + ai*vr]. Passing -ai
// yields multiplication by the conjugate.
inline __m256d cmul(__m256d v, __m256d ar, __m256d ai) {
  const __m256d swapped = _mm256_permute_pd(v, 0x5);
  return _mm256_fmaddsub_pd(ar, v, _mm256_mul_pd(ai, swapped));
}

void point_step_avx2(std::size_t n, const double* z_re, const double* z_im,
                     double* phi_re, double* phi_im, double* ps_re, double* ps_im,
                     double alpha_re, double alpha_im) {
  const __m256d ar = _mm256_set1_pd(alpha_re);
  const __m256d ai = _mm256_set1_pd(alpha_im);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d zr = _mm256_loadu_pd(z_re + i);
    const __m256d zi = _mm256_loadu_pd(z_im + i);
    const __m256d fr = _mm256_loadu_pd(phi_re + i);
    const __m256d fi = _mm256_loadu_pd(phi_im + i);
    const __m256d pr = _mm256_loadu_pd(ps_re + i);
    const __m256d pi = _mm256_loadu_pd(ps_im + i);

    const __m256d tr = _mm256_fmsub_pd(zr, fr, _mm256_mul_pd(zi, fi));
    const __m256d ti = _mm256_fmadd_pd(zr, fi, _mm256_mul_pd(zi, fr));

    const __m256d fr2 = _mm256_sub_pd(tr, _mm256_fmadd_pd(ar, pr, _mm256_mul_pd(ai, pi)));
    const __m256d fi2 = _mm256_sub_pd(ti, _mm256_fmsub_pd(ar, pi, _mm256_mul_pd(ai, pr)));
    const __m256d pr2 = _mm256_sub_pd(pr, _mm256_fmsub_pd(ar, tr, _mm256_mul_pd(ai, ti)));
    const __m256d pi2 = _mm256_sub_pd(pi, _mm256_fmadd_pd(ar, ti, _mm256_mul_pd(ai, tr)));

    _mm256_storeu_pd(phi_re + i, fr2);
    _mm256_storeu_pd(phi_im + i, fi2);
    _mm256_storeu_pd(ps_re + i, pr2);
    _mm256_storeu_pd(ps_im + i, pi2);
  }
  for (; i < n; ++i) {
    const double tr = z_re[i] * phi_re[i] - z_im[i] * phi_im[i];
    const double ti = z_re[i] * phi_im[i] + z_im[i] * phi_re[i];
    const double pr = ps_re[i];
    const double pi = ps_im[i];
    phi_re[i] = tr - (alpha_re * pr + alpha_im * pi);
    phi_im[i] = ti - (alpha_re * pi - alpha_im * pr);
    ps_re[i] = pr - (alpha_re * tr - alpha_im * ti);
    ps_im[i] = pi - (alpha_re * ti + alpha_im * tr);
  }
}

void coeff_step_avx2(std::size_t n, const double* phi, const double* ps,
                     double* phi_out, double* ps_out, double alpha_re, double alpha_im) {
  const double ar = alpha_re, ai = alpha_im;
  phi_out[0] = -(ar * ps[0] + ai * ps[1]);
  phi_out[1] = -(ar * ps[1] - ai * ps[0]);
  ps_out[0] = ps[0];
  ps_out[1] = ps[1];

  const __m256d var = _mm256_set1_pd(ar);
  const __m256d vai = _mm256_set1_pd(ai);
  const __m256d vnai = _mm256_set1_pd(-ai);
  std::size_t j = 1;
  for (; j + 2 <= n; j += 2) {
    const __m256d x = _mm256_loadu_pd(phi + 2 * (j - 1));  // phi[j-1], phi[j]
    const __m256d p = _mm256_loadu_pd(ps + 2 * j);         // ps[j], ps[j+1]
    _mm256_storeu_pd(phi_out + 2 * j, _mm256_sub_pd(x, cmul(p, var, vnai)));
    _mm256_storeu_pd(ps_out + 2 * j, _mm256_sub_pd(p, cmul(x, var, vai)));
  }
  for (; j < n; ++j) {
    const double xr = phi[2 * (j - 1)];
    const double xi = phi[2 * (j - 1) + 1];
    const double pr = ps[2 * j];
    const double pi = ps[2 * j + 1];
    phi_out[2 * j] = xr - (ar * pr + ai * pi);
    phi_out[2 * j + 1] = xi - (ar * pi - ai * pr);
    ps_out[2 * j] = pr - (ar * xr - ai * xi);
    ps_out[2 * j + 1] = pi - (ar * xi + ai * xr);
  }
  const double xr = phi[2 * (n - 1)];
  const double xi = phi[2 * (n - 1) + 1];
  phi_out[2 * n] = xr;
  phi_out[2 * n + 1] = xi;
  ps_out[2 * n] = -(ar * xr - ai * xi);
  ps_out[2 * n + 1] = -(ar * xi + ai * xr);
}

double max_abs2_avx2(std::size_t n, const double* v) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(v + 2 * i);
    const __m256d b = _mm256_loadu_pd(v + 2 * i + 4);
    // hadd pairs re^2+im^2; lane order is shuffled, which max ignores.
    acc = _mm256_max_pd(acc, _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double best = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) {
    const double m = v[2 * i] * v[2 * i] + v[2 * i + 1] * v[2 * i + 1];
    best = std::max(best, m);
  }
  return best;
}

}  // namespace

const Dispatch& avx2_kernels() {
  static const Dispatch table{"avx2", &point_step_avx2, &coeff_step_avx2, &max_abs2_avx2};
  return table;
}

bool avx2_supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace opuc::kernels
