#pragma once

#include <cstddef>
#include <functional>

namespace chaos {

/// Worker count: hardware concurrency, capped by the CHAOS_THREADS
/// environment variable when it holds a positive integer.
std::size_t worker_count();

/// Calls task(i) for i in [0, n) on up to `workers` threads (0 = worker_count()).
/// Tasks are claimed in index order; the first exception is rethrown after
/// all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task,
                  std::size_t workers = 0);

}  // namespace chaos
