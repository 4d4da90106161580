#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace hypercouple {

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. Indices are split
/// into contiguous blocks; callers write into per-index slots, so results do
/// not depend on the number of threads. The first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  const std::size_t width = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count));
  if (width <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(width);
  std::vector<std::thread> threads;
  threads.reserve(width);
  for (std::size_t w = 0; w < width; ++w) {
    threads.emplace_back([&, w] {
      const std::size_t lo = count * w / width;
      const std::size_t hi = count * (w + 1) / width;
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace hypercouple
