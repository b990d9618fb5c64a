#pragma once

#include <cstddef>
#include <functional>

namespace leafdim {

// Number of worker threads: min(hardware_concurrency, LEAFDIM_THREADS if set).
// A value of 1 disables threading entirely.
int worker_count();

// Runs fn(i) for i in [0, count). Work items must be independent; results
// should be written to pre-sized slots so the output order is deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace leafdim
