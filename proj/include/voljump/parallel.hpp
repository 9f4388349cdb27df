#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace voljump {

/// Worker count: VOLJUMP_THREADS when set and positive, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Each index is executed exactly once; the
/// assignment of indices to threads is unspecified, so bodies must only write
/// to slots they own.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Evaluates fn over [0, n) and returns the results in index order, which
/// makes any later reduction independent of the worker count.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace voljump
