// Copyright 2026 The metalab Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef METALAB_DETAIL_PARALLEL_HPP_
#define METALAB_DETAIL_PARALLEL_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace metalab::detail {

/// Thread budget: METAPLECTIC_LAB_THREADS if set and positive, otherwise the
/// hardware concurrency.
inline unsigned thread_budget() {
  if (const char* env = std::getenv("METAPLECTIC_LAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(block_index) for every block in [0, num_blocks). Blocks are the
/// unit of determinism: callers write per-block partial results and reduce them
/// in block order afterwards, so results never depend on the thread count.
template <class Body>
void parallel_blocks(std::size_t num_blocks, Body&& body) {
  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(thread_budget(), num_blocks));
  if (threads <= 1) {
    for (std::size_t b = 0; b < num_blocks; ++b) body(b);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t b = t; b < num_blocks; b += threads) {
        try {
          body(b);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace metalab::detail

#endif  // METALAB_DETAIL_PARALLEL_HPP_
