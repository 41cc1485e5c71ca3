#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace pretopomd {

/// Worker count used by the library's parallel loops. 0 means one per
/// hardware thread. Defaults to 1.
void set_thread_count(unsigned n) noexcept;
unsigned thread_count() noexcept;

/// Runs body(begin, end) over disjoint chunks of [0, n). Each index is
/// visited exactly once; chunk boundaries do not depend on timing, so any
/// body writing only to its own indices produces identical results for every
/// worker count.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t workers =
      std::min<std::size_t>(thread_count(), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
}

}  // namespace pretopomd
