#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace qh {

/// Worker count: the OpenMP default, capped by the QH_THREADS environment variable.
int thread_cap();

/// Calls body(i) for i in [0, n). Parallel runs use dynamic scheduling over thread_cap()
/// workers; the first exception thrown by any body is rethrown after the loop. Results
/// written to slot i by body(i) are identical in both modes.
template <class F>
void for_each_index(std::size_t n, bool parallel, F&& body) {
  if (!parallel) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr err;
  std::mutex m;
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(thread_cap())
  for (long i = 0; i < count; ++i) {
    {
      std::lock_guard<std::mutex> lock(m);
      if (err) continue;
    }
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(m);
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace qh
