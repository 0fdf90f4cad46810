#pragma once

#include <cstddef>
#include <functional>

namespace rffmd {

/// Number of worker threads: RFFMD_THREADS if set and positive, otherwise the
/// number of logical cores.
int thread_count();

/// Overrides the worker count for the current process (0 restores the default).
void set_thread_count(int n);

/// Runs body(i) for i in [0, n) on up to thread_count() threads.
///
/// Work items are claimed dynamically, so callers that need results that are
/// independent of the thread count must make each item's output depend only on
/// i and reduce the per-item results in index order afterwards. Nested calls
/// run serially on the calling thread. The first exception thrown by any item
/// is rethrown after all workers have stopped.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Splits [0, n) into `parts` contiguous ranges of near-equal size and returns
/// the bounds of range `p`.
struct Range {
    std::size_t begin;
    std::size_t end;
};
Range partition_range(std::size_t n, std::size_t parts, std::size_t p);

} // namespace rffmd
