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

#include "opuc/kernels.hpp"

#include <algorithm>

namespace opuc::kernels {

namespace {

void point_step_scalar(std::size_t n, const double* z_re, const double* z_im,
                       double* phi_re, double* phi_im, double* ps_re, double* ps_im,
                       double ar, double ai) {
  for (std::size_t i = 0; i < n; ++i) {
    const double tr = z_re[i] * phi_re[i] - z_im[i] * phi_im[i];
    const double ti = z_re[i] * phi_im[i] + z_im[i] * phi_re[i];
    const double pr = ps_re[i];
    const double pi = ps_im[i];
    phi_re[i] = tr - (ar * pr + ai * pi);
    phi_im[i] = ti - (ar * pi - ai * pr);
    ps_re[i] = pr - (ar * tr - ai * ti);
    ps_im[i] = pi - (ar * ti + ai * tr);
  }
}

void coeff_step_scalar(std::size_t n, const double* phi, const double* ps,
                       double* phi_out, double* ps_out, double ar, double ai) {
  // j = 0: phi[-1] = 0, and ps_out[0] = ps[0] exactly.
  phi_out[0] = -(ar * ps[0] + ai * ps[1]);
  phi_out[1] = -(ar * ps[1] - ai * ps[0]);
  ps_out[0] = ps[0];
  ps_out[1] = ps[1];
  for (std::size_t j = 1; j < n; ++j) {
    const double xr = phi[2 * (j - 1)];
    const double xi = phi[2 * (j - 1) + 1];
    const double pr = ps[2 * j];
    const double pi = ps[2 * j + 1];
    phi_out[2 * j] = xr - (ar * pr + ai * pi);
    phi_out[2 * j + 1] = xi - (ar * pi - ai * pr);
    ps_out[2 * j] = pr - (ar * xr - ai * xi);
    ps_out[2 * j + 1] = pi - (ar * xi + ai * xr);
  }
  // j = n: ps[n] = 0, and phi_out[n] = phi[n-1] exactly (monic top).
  const double xr = phi[2 * (n - 1)];
  const double xi = phi[2 * (n - 1) + 1];
  phi_out[2 * n] = xr;
  phi_out[2 * n + 1] = xi;
  ps_out[2 * n] = -(ar * xr - ai * xi);
  ps_out[2 * n + 1] = -(ar * xi + ai * xr);
}

double max_abs2_scalar(std::size_t n, const double* v) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = v[2 * i] * v[2 * i] + v[2 * i + 1] * v[2 * i + 1];
    best = std::max(best, m);
  }
  return best;
}

}  // namespace

const Dispatch& scalar_kernels() {
  static const Dispatch table{"scalar", &point_step_scalar, &coeff_step_scalar,
                              &max_abs2_scalar};
  return table;
}

}  // namespace opuc::kernels
