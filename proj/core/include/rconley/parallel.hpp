#pragma once

#include <cstddef>
#include <functional>

namespace rconley {

/// Worker count: the explicit setting if positive, else RCONLEY_THREADS, else
/// hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs fn(i) for i in [0, n) on a pool of jthreads. The first exception
/// thrown by a job is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace rconley
