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

#include <cstdint>
#include <functional>

namespace opuc {

/// Number of worker threads. Honors the OPUC_THREADS environment variable,
/// otherwise uses std::thread::hardware_concurrency().
unsigned worker_count();

/// Runs fn(block_index, lo, hi) over the index range [0, count) split into
/// fixed-size blocks. Block boundaries do not depend on the worker count, so
/// per-block results merged in block order are identical for any OPUC_THREADS
/// setting. Exceptions thrown inside fn are rethrown on the calling thread.
void parallel_blocks(std::uint64_t count, std::uint64_t block_size,
                     const std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)>& fn);

}  // namespace opuc
