#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace issl {

/// Execution policy for ensemble loops. jobs == 1 selects the serial
/// reference path; jobs == 0 lets OpenMP pick the thread count.
struct Exec {
  int jobs = 0;

  static Exec serial() { return Exec{1}; }
};

/// Serial reference loop: fn(0), fn(1), ... in index order.
template <class F>
void serial_for(std::size_t count, F&& fn) {
  for (std::size_t i = 0; i < count; ++i) fn(i);
}

/// Runs fn(i) for i in [0, count). Callers write results into slot i only, so
/// the outcome does not depend on scheduling; reductions happen afterwards in
/// index order. The first exception thrown by any iteration is rethrown.
template <class F>
void parallel_for(std::size_t count, Exec exec, F&& fn) {
#ifdef _OPENMP
  if (exec.jobs != 1 && count > 1) {
    const int threads = exec.jobs > 0 ? exec.jobs : omp_get_max_threads();
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto total = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long long i = 0; i < total; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
    return;
  }
#endif
  serial_for(count, fn);
}

}  // namespace issl
