#pragma once

#include <cstddef>
#include <functional>

namespace derivkit {

// Worker cap: DERIVKIT_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t worker_count();

// Runs body(i) for i in [0, count). Each index is processed exactly once;
// callers write results into per-index slots so the outcome does not depend
// on scheduling. The first exception thrown by a body is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace derivkit
