#pragma once

#include <cstddef>
#include <functional>

namespace spinpair {

/// Number of worker threads: SPINPAIR_THREADS if set (0 = auto), otherwise
/// the hardware concurrency.
unsigned thread_budget();

/// Run fn(0..n-1) across the thread budget with a static block partition.
/// Results must be written to disjoint, preallocated slots so the outcome is
/// independent of the thread count.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

}  // namespace spinpair
