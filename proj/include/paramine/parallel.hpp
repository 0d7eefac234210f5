#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace paramine {

// Runs fn(i) for i in [0, n) over contiguous blocks. Callers write to
// per-index slots, so results are identical for any worker count.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (n == 0) return;
  std::size_t nthreads = workers < 2 ? 1 : std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  if (nthreads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  std::size_t chunk = (n + nthreads - 1) / nthreads;
  for (std::size_t t = 0; t < nthreads; ++t) {
    std::size_t lo = t * chunk;
    std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, &err, &err_mu, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace paramine
