#pragma once

#include <cstddef>
#include <functional>

namespace tunneltimes {

/// Worker count from TUNNELTIMES_THREADS (0 or unset = hardware concurrency).
unsigned worker_count();

/// Splits [0, count) into contiguous blocks and runs body(begin, end) on each,
/// one block per worker. Blocks are disjoint, so results written by index are
/// independent of the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace tunneltimes
