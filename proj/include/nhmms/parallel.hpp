#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace nhmms {

/// Worker count used by parallel_for. 0 selects the hardware count.
void set_thread_count(std::size_t n);
std::size_t thread_count();

namespace detail {
inline thread_local bool in_worker = false;
}

/// Runs body(i) for i in [0, count) over static contiguous blocks.
/// Callers write results into per-index slots and reduce afterwards, so
/// results never depend on the worker count. Nested calls run serially.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  const std::size_t workers = detail::in_worker ? 1 : std::min(thread_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t block = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      detail::in_worker = true;
      try {
        const std::size_t lo = w * block;
        const std::size_t hi = std::min(count, lo + block);
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace nhmms
