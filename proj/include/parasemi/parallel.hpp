#pragma once

#include <cstddef>
#include <functional>

namespace parasemi {

/// Worker count: PARASEMI_THREADS if set and positive, else hardware concurrency.
/// An explicit request > 0 overrides both; the result is never below 1.
std::size_t worker_count(std::size_t requested = 0);

/// Calls fn(begin, end) on contiguous chunks of [0, n). Results must not
/// depend on the chunking; callers write into disjoint slots.
void parallel_chunks(std::size_t n, std::size_t workers,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace parasemi
