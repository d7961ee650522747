// Copyright 2026 The mcdenoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace mcdenoise {

/// Resolves a thread-count request: 0 means "all available cores".
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/// Runs fn(begin, end, chunk_index) over a static partition of [0, n) into
/// at most `threads` contiguous chunks. The partition depends only on
/// (n, threads), so any reduction done per chunk and combined in chunk order
/// is reproducible for a fixed thread count. With threads <= 1 everything
/// runs inline on the calling thread.
inline void parallel_chunks(std::size_t n, unsigned threads,
                            const std::function<void(std::size_t, std::size_t, unsigned)>& fn) {
  if (n == 0) return;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), n));
  if (workers <= 1) {
    fn(0, n, 0);
    return;
  }
  const std::size_t base = n / workers;
  const std::size_t extra = n % workers;
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  std::size_t begin = 0;
  for (unsigned k = 0; k < workers; ++k) {
    const std::size_t len = base + (k < extra ? 1 : 0);
    const std::size_t end = begin + len;
    if (k == workers - 1) {
      fn(begin, end, k);
    } else {
      pool.emplace_back([&fn, begin, end, k] { fn(begin, end, k); });
    }
    begin = end;
  }
  for (auto& t : pool) t.join();
}

}  // namespace mcdenoise
