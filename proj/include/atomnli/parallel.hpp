#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <utility>
#include <vector>

namespace atomnli {

/// Serial reference loop. The parallel kernels are tested against this path
/// and must produce identical results for pure per-index work.
template <typename Fn>
void for_each_index_serial(std::size_t n, Fn&& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

/// OpenMP map over [0, n). Each index must write only to its own output slot.
/// If several indices throw, the lowest index wins, which is the exception a
/// serial run would have surfaced first.
template <typename Fn>
void for_each_index_parallel(std::size_t n, int workers, Fn&& fn) {
#ifdef _OPENMP
  if (workers > 1 && n > 1) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<bool> failed{false};
#pragma omp parallel for schedule(static) num_threads(workers)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
    if (failed.load(std::memory_order_relaxed)) {
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
    return;
  }
#endif
  (void)workers;
  for_each_index_serial(n, std::forward<Fn>(fn));
}

/// Dispatch: workers <= 1 runs the serial reference, anything larger the
/// OpenMP kernel. Outputs are identical either way.
template <typename Fn>
void for_each_index(std::size_t n, int workers, Fn&& fn) {
  if (workers > 1) {
    for_each_index_parallel(n, workers, std::forward<Fn>(fn));
  } else {
    for_each_index_serial(n, std::forward<Fn>(fn));
  }
}

}  // namespace atomnli
