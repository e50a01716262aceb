// Copyright 2026 The qsm authors
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

#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace qsm {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs `body(first, last, acc)` over [0, n) split into fixed-size chunks and
// folds the per-chunk accumulators in chunk order. Chunk boundaries do not
// depend on the thread count, and the fold order is fixed, so results are
// bit-identical for any number of workers.
//
// Acc must be default-constructible; Fold is `void(Acc& total, const Acc&)`.
template <class Acc, class Body, class Fold>
Acc parallel_chunked(std::int64_t n, int threads, Body&& body, Fold&& fold,
                     std::int64_t chunk_size = 4096) {
  const std::int64_t num_chunks = n <= 0 ? 0 : (n + chunk_size - 1) / chunk_size;
  std::vector<Acc> partial(static_cast<std::size_t>(num_chunks));
  const int workers = std::min<std::int64_t>(resolve_threads(threads), num_chunks);

  if (workers <= 1) {
    for (std::int64_t c = 0; c < num_chunks; ++c) {
      const std::int64_t first = c * chunk_size;
      const std::int64_t last = std::min(n, first + chunk_size);
      body(first, last, partial[static_cast<std::size_t>(c)]);
    }
  } else {
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto work = [&] {
      for (;;) {
        const std::int64_t c = next.fetch_add(1);
        if (c >= num_chunks || failed.load()) return;
        const std::int64_t first = c * chunk_size;
        const std::int64_t last = std::min(n, first + chunk_size);
        try {
          body(first, last, partial[static_cast<std::size_t>(c)]);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(error);
  }

  Acc total{};
  for (const auto& p : partial) fold(total, p);
  return total;
}

}  // namespace qsm
