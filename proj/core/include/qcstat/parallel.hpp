#pragma once

#include <cstddef>
#include <functional>

namespace qcstat {

// Worker count: QCSTAT_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
unsigned default_thread_count();

// Calls fn(i) for i in [0, n). Work is split into contiguous chunks, so
// results written by index are independent of the thread count. The first
// exception thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned threads = default_thread_count());

}  // namespace qcstat
