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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <string>
#include <vector>

#include "opuc/kernels.hpp"
#include "opuc/rng.hpp"

using namespace opuc;
using Complex = std::complex<double>;

namespace {

std::vector<double> random_doubles(std::size_t n, std::uint64_t stream) {
  PhiloxStream s(424242, stream);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 2.0 * s.uniform01(i) - 1.0;
  return v;
}

void check_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(std::abs(a[i] - b[i]) <= tol * (1.0 + std::abs(a[i])));
}

const std::vector<std::size_t> kSizes = {1, 2, 3, 4, 5, 7, 8, 16, 33, 64, 67};

}  // namespace

TEST_CASE("dispatcher exposes a named kernel table") {
  const auto& active = kernels::active_kernels();
  const std::string name = active.name;
  CHECK((name == "scalar" || name == "avx2"));
}

TEST_CASE("point_step: scalar agrees with the std::complex definition") {
  const auto& scalar = kernels::scalar_kernels();
  for (std::size_t n : kSizes) {
    auto zr = random_doubles(n, 1), zi = random_doubles(n, 2);
    auto fr = random_doubles(n, 3), fi = random_doubles(n, 4);
    auto pr = random_doubles(n, 5), pi = random_doubles(n, 6);
    const Complex alpha{0.3, -0.4};

    std::vector<Complex> phi(n), ps(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Complex z{zr[i], zi[i]};
      const Complex t = z * Complex{fr[i], fi[i]};
      phi[i] = t - std::conj(alpha) * Complex{pr[i], pi[i]};
      ps[i] = Complex{pr[i], pi[i]} - alpha * t;
    }

    scalar.point_step(n, zr.data(), zi.data(), fr.data(), fi.data(), pr.data(), pi.data(),
                      alpha.real(), alpha.imag());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(fr[i] == doctest::Approx(phi[i].real()).epsilon(1e-14));
      CHECK(fi[i] == doctest::Approx(phi[i].imag()).epsilon(1e-14));
      CHECK(pr[i] == doctest::Approx(ps[i].real()).epsilon(1e-14));
      CHECK(pi[i] == doctest::Approx(ps[i].imag()).epsilon(1e-14));
    }
  }
}

#if defined(OPUC_HAVE_AVX2_TU)

TEST_CASE("point_step: avx2 is equivalent to scalar") {
  if (!kernels::avx2_supported()) return;
  const auto& scalar = kernels::scalar_kernels();
  const auto& avx2 = kernels::avx2_kernels();
  for (std::size_t n : kSizes) {
    const auto zr0 = random_doubles(n, 11), zi0 = random_doubles(n, 12);
    const auto fr0 = random_doubles(n, 13), fi0 = random_doubles(n, 14);
    const auto pr0 = random_doubles(n, 15), pi0 = random_doubles(n, 16);
    const Complex alpha{-0.62, 0.21};

    auto fr_s = fr0, fi_s = fi0, pr_s = pr0, pi_s = pi0;
    scalar.point_step(n, zr0.data(), zi0.data(), fr_s.data(), fi_s.data(), pr_s.data(),
                      pi_s.data(), alpha.real(), alpha.imag());
    auto fr_v = fr0, fi_v = fi0, pr_v = pr0, pi_v = pi0;
    avx2.point_step(n, zr0.data(), zi0.data(), fr_v.data(), fi_v.data(), pr_v.data(),
                    pi_v.data(), alpha.real(), alpha.imag());

    check_close(fr_s, fr_v, 1e-14);
    check_close(fi_s, fi_v, 1e-14);
    check_close(pr_s, pr_v, 1e-14);
    check_close(pi_s, pi_v, 1e-14);
  }
}

TEST_CASE("coeff_step: avx2 is equivalent to scalar and keeps exact boundaries") {
  if (!kernels::avx2_supported()) return;
  const auto& scalar = kernels::scalar_kernels();
  const auto& avx2 = kernels::avx2_kernels();
  for (std::size_t n : kSizes) {
    const auto phi = random_doubles(2 * n, 21);
    const auto ps = random_doubles(2 * n, 22);
    const Complex alpha{0.55, 0.3};

    std::vector<double> phi_s(2 * (n + 1)), ps_s(2 * (n + 1));
    std::vector<double> phi_v(2 * (n + 1)), ps_v(2 * (n + 1));
    scalar.coeff_step(n, phi.data(), ps.data(), phi_s.data(), ps_s.data(), alpha.real(),
                      alpha.imag());
    avx2.coeff_step(n, phi.data(), ps.data(), phi_v.data(), ps_v.data(), alpha.real(),
                    alpha.imag());

    check_close(phi_s, phi_v, 1e-14);
    check_close(ps_s, ps_v, 1e-14);
    // Copied boundaries are bit-exact in both variants.
    for (const auto* out : {&ps_s, &ps_v}) {
      CHECK((*out)[0] == ps[0]);
      CHECK((*out)[1] == ps[1]);
    }
    for (const auto* out : {&phi_s, &phi_v}) {
      CHECK((*out)[2 * n] == phi[2 * n - 2]);
      CHECK((*out)[2 * n + 1] == phi[2 * n - 1]);
    }
  }
}

TEST_CASE("max_abs2: avx2 is equivalent to scalar") {
  if (!kernels::avx2_supported()) return;
  for (std::size_t n : kSizes) {
    const auto buf = random_doubles(2 * n, 31);
    const double s = kernels::scalar_kernels().max_abs2(n, buf.data());
    const double v = kernels::avx2_kernels().max_abs2(n, buf.data());
    CHECK(v == doctest::Approx(s).epsilon(1e-15));
  }
}

#endif  // OPUC_HAVE_AVX2_TU

TEST_CASE("max_abs2 matches a hand loop") {
  for (std::size_t n : kSizes) {
    const auto buf = random_doubles(2 * n, 41);
    double expected = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      expected = std::max(expected, buf[2 * i] * buf[2 * i] + buf[2 * i + 1] * buf[2 * i + 1]);
    CHECK(kernels::scalar_kernels().max_abs2(n, buf.data()) == doctest::Approx(expected));
    CHECK(kernels::active_kernels().max_abs2(n, buf.data()) ==
          doctest::Approx(expected).epsilon(1e-15));
  }
  CHECK(kernels::scalar_kernels().max_abs2(0, nullptr) == 0.0);
}
