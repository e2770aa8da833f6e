#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace allroots {

/// @brief Static contiguous partition of [0, n) across up to `threads`
/// workers. The partition depends only on n and the iteration body must be
/// independent per index, so results never depend on the thread count.
template <class F>
inline void parallel_for(std::size_t n, int threads, F&& body) {
  if (threads <= 1 || n < 256) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(std::size_t(threads), (n + 255) / 256);
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = n * w / workers;
    const std::size_t hi = n * (w + 1) / workers;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
}

}  // namespace allroots
