#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace lmbs::detail {

// Runs body(begin, end) over contiguous chunks of [0, count) on up to
// `threads` workers and rethrows the first failure.
template <class Body>
void parallel_chunks(long count, int threads, const Body& body) {
  const long workers = std::clamp<long>(threads, 1, std::max<long>(1, count));
  if (workers == 1) {
    body(0L, count);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (long w = 0; w < workers; ++w) {
    const long begin = count * w / workers;
    const long end = count * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace lmbs::detail
