#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace bosonic {

// Worker cap: BOSONIC_THREADS if set, else hardware concurrency.
inline unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BOSONIC_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return std::min<unsigned>(static_cast<unsigned>(v), hw);
    } catch (...) {
    }
  }
  return hw;
}

// Runs body(i) for i in [0, count). Each index must write only its own
// output slot so results do not depend on scheduling.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < count; i += workers) body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace bosonic
