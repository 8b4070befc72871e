#pragma once

#include <cstddef>
#include <functional>

namespace entrot {

/// Number of worker threads: hardware concurrency capped by ENTROT_THREADS.
std::size_t thread_budget();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunk boundaries
/// never change how a single index is reduced, so results are bit-identical
/// to a sequential loop.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 64);

}  // namespace entrot
