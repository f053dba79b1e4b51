#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace orlicz {

// Runs body(begin, end) over contiguous chunks of [0, count). Chunk i always
// covers the same range for a given count and worker count, and callers
// reduce per-chunk results in chunk order, so results do not depend on
// scheduling.
template <typename Body>
void parallel_chunks(std::size_t count, Body&& body) {
  const std::size_t workers = std::max<std::size_t>(
      1, std::min<std::size_t>(std::thread::hardware_concurrency(), count / 256));
  if (workers <= 1) {
    body(std::size_t{0}, count, std::size_t{0});
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t step = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * step;
    const std::size_t end = std::min(count, begin + step);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end, w] { body(begin, end, w); });
  }
}

inline std::size_t chunk_count(std::size_t count) {
  return std::max<std::size_t>(
      1, std::min<std::size_t>(std::thread::hardware_concurrency(), count / 256));
}

}  // namespace orlicz
