// Fixed-partition worker pool helpers. Work is split into contiguous chunks,
// one per worker, so reductions merged in worker order are deterministic.
#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace rvm {

/// Worker count from the RVM_WORKERS environment variable, else `fallback`.
int workers_from_env(int fallback);

/// body(begin, end, worker) over `workers` contiguous chunks of [0, n).
template <class Body>
void parallel_chunks(std::size_t n, int workers, Body&& body) {
  workers = std::max(1, workers);
  if (workers == 1 || n < 2) {
    body(std::size_t{0}, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const std::size_t b = n * static_cast<std::size_t>(w) / static_cast<std::size_t>(workers);
    const std::size_t e = n * static_cast<std::size_t>(w + 1) / static_cast<std::size_t>(workers);
    pool.emplace_back([&body, &errors, b, e, w] {
      try {
        body(b, e, w);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace rvm
