#pragma once

#include <cstddef>
#include <functional>

namespace graphseg {

/// Worker count: GRAPHSEG_THREADS if set and positive, else hardware
/// concurrency (at least 1).
unsigned thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunks touch
/// disjoint index ranges, so results do not depend on the thread count as
/// long as body writes only to its own range.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace graphseg
