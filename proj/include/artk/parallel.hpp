#pragma once

#include <cstddef>
#include <functional>

namespace artk {

// Worker cap from ARTK_THREADS (0 or unset = hardware concurrency).
std::size_t worker_count();

// Calls fn(i) for i in [0, n) across worker threads. Each index is handled
// exactly once; callers write results into pre-sized slots, so output order
// never depends on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace artk
