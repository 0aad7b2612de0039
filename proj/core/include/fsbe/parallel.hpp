#pragma once

// Index-sliced work fan-out. Each task writes only to its own index, so any
// worker count produces identical results; merging is done by the caller in
// index order.

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fsbe {

template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
  if (n == 0) return;
  if (workers <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  workers = std::min(workers, n);
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mu;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        std::scoped_lock lk(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace fsbe
