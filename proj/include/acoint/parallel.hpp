#pragma once

#include <cstddef>
#include <functional>

namespace acoint {

/// Worker count: ACOINT_WORKERS if set and positive, else the hardware
/// concurrency (at least 1).
int default_workers();

/// Calls fn(i) for i in [0, n) on up to `workers` threads. Each index is
/// handled exactly once; callers write results by index so the outcome does
/// not depend on scheduling. Calls made from inside a worker run serially.
/// The first exception thrown by fn is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int workers = 0);

}  // namespace acoint
