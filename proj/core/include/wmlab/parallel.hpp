#pragma once

#include <cstddef>
#include <functional>

namespace wmlab {

// Worker cap: WMLAB_WORKERS if set and positive, else hardware concurrency.
int worker_count();

// Runs body(i) for i in [0, n). Each index runs exactly once; callers write
// results into per-index slots so the outcome does not depend on scheduling.
// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace wmlab
