#pragma once

#include <cstddef>
#include <functional>

namespace magcurv {

// Worker count: MAGCURV_THREADS when set and positive, else the hardware
// concurrency (at least 1).
unsigned default_thread_count();

// Runs body(i) for i in [0, count) across worker threads. Each index is
// visited exactly once; callers write results into per-index slots and
// reduce afterwards in index order, so the output does not depend on the
// thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

}  // namespace magcurv
