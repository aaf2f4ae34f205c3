#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace sgspec {

// Worker count resolution: explicit request > SGSPEC_THREADS > hardware.
inline int resolve_threads(int requested = 0) {
  if (requested > 0) return std::min(requested, 256);
  if (const char* env = std::getenv("SGSPEC_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return std::min(v, 256);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(std::min(hc, 16u));
}

// Applies body(i) for i in [0, n) over contiguous chunks.  Results must be
// written through the index, so the output order is deterministic regardless
// of the worker count.  body must be safe to call concurrently.
template <class F>
void parallel_for(int n, F&& body, int threads = 0) {
  if (n <= 0) return;
  int nw = std::min(resolve_threads(threads), n);
  if (nw <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nw);
  std::exception_ptr first_error = nullptr;
  std::mutex err_mutex;
  int chunk = (n + nw - 1) / nw;
  for (int w = 0; w < nw; ++w) {
    int lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi]() {
      try {
        for (int i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace sgspec
