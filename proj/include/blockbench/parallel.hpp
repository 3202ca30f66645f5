#pragma once

#include <omp.h>

#include <cstddef>
#include <exception>
#include <vector>

namespace blockbench {

/// 0 means every available core.
inline int resolve_threads(int requested) noexcept {
  return requested > 0 ? requested : omp_get_max_threads();
}

/// Runs body(i) for i in [0, count) on an OpenMP team. An exception thrown by
/// any iteration is rethrown after the loop; the one from the lowest index
/// wins, so the error does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t count, int threads, Body&& body, bool dynamic = false) {
  std::vector<std::exception_ptr> errors(count);
  bool failed = false;
  const long n = static_cast<long>(count);
  if (dynamic) {
#pragma omp parallel for schedule(dynamic) num_threads(resolve_threads(threads)) reduction(|| : failed)
    for (long i = 0; i < n; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  } else {
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads)) reduction(|| : failed)
    for (long i = 0; i < n; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  }
  if (!failed) return;
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace blockbench
