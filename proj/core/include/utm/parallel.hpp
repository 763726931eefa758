#pragma once

#include <cstddef>
#include <functional>

namespace utm {

// Worker count: UTM_THREADS if set, otherwise the hardware concurrency.
int default_threads();

// Runs fn(i) for i in [0, n) on up to `threads` workers (0: default).
// The first exception thrown by any item is rethrown after all workers stop.
void parallel_for(size_t n, const std::function<void(size_t)>& fn, int threads = 0);

}  // namespace utm
