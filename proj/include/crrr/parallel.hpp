#pragma once

#include <exception>
#include <thread>
#include <vector>

#include "crrr/types.hpp"

namespace crrr {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, count) on up to `threads` workers in contiguous
/// blocks. Exceptions are collected per index and the lowest-index one is
/// rethrown after all workers join, so failure behavior does not depend on
/// the schedule.
template <class F>
void parallel_for(Index count, int threads, F&& fn) {
  threads = std::min<Index>(resolve_threads(threads), count);
  if (count <= 0) return;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  if (threads <= 1) {
    for (Index i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      const Index begin = count * t / threads;
      const Index end = count * (t + 1) / threads;
      pool.emplace_back([&, begin, end] {
        for (Index i = begin; i < end; ++i) {
          try {
            fn(i);
          } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace crrr
