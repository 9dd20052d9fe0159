#ifndef RANGESHAPE_PARALLEL_HPP
#define RANGESHAPE_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace rangeshape {

/// Worker count; 0 means one per hardware thread.
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Reads RANGESHAPE_THREADS (0 or unset = auto).
inline unsigned threads_from_env() {
  const char* s = std::getenv("RANGESHAPE_THREADS");
  if (s == nullptr || *s == '\0') return resolve_threads(0);
  try {
    const long v = std::stol(s);
    return resolve_threads(v > 0 ? static_cast<unsigned>(v) : 0u);
  } catch (const std::exception&) {
    return resolve_threads(0);
  }
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers, striding the index
/// range. fn must only write to slot i of its output. The first exception
/// thrown by any worker is rethrown on the caller.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace rangeshape

#endif
