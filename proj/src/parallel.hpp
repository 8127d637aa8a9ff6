#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace arrival::detail {

// Runs body(i) for i in [0, n) on contiguous blocks. Each index is written by
// exactly one worker, so results do not depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, Body body, std::size_t min_block = 64) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, std::max<std::size_t>(1, n / min_block));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t block = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * block, hi = std::min(n, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace arrival::detail
