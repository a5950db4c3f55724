#pragma once

#include <functional>

namespace graphkdv {

/// Worker count: GRAPHKDV_THREADS if set and positive, else the hardware concurrency (at least 1).
int thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. The first exception is rethrown.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace graphkdv
