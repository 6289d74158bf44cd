#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace gkpd {

// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must be
// written to per-index slots so the outcome is independent of the split.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  const int workers = std::min({threads, count, static_cast<int>(std::thread::hardware_concurrency() > 0
                                                                     ? std::thread::hardware_concurrency()
                                                                     : 1u)});
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
}

}  // namespace gkpd
