#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace altlin {

/// Loop policy for sampled kernels. kSerial is the reference path used by
/// tests; both produce identical results because per-index work is written
/// to its own slot and reductions happen afterwards in index order.
enum class Execution { kSerial, kParallel };

template <class Fn>
void for_each_index(std::size_t n, Execution exec, Fn&& fn) {
  if (exec == Execution::kSerial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace altlin
