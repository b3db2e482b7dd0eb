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

#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace opuc::kernels {

namespace {

const Dispatch& select() {
  const char* wanted = std::getenv("OPUC_KERNEL");
  if (wanted != nullptr) {
    if (std::strcmp(wanted, "scalar") == 0) return scalar_kernels();
#if defined(OPUC_HAVE_AVX2_TU)
    if (std::strcmp(wanted, "avx2") == 0) {
      if (!avx2_supported())
        throw std::runtime_error("OPUC_KERNEL=avx2 requested but the CPU lacks AVX2/FMA");
      return avx2_kernels();
    }
#endif
    throw std::runtime_error(std::string("unknown OPUC_KERNEL value: ") + wanted);
  }
#if defined(OPUC_HAVE_AVX2_TU)
  if (avx2_supported()) return avx2_kernels();
#endif
  return scalar_kernels();
}

}  // namespace

const Dispatch& active_kernels() {
  static const Dispatch& chosen = select();
  return chosen;
}

}  // namespace opuc::kernels
