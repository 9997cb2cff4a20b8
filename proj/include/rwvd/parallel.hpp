#pragma once

#include <cstddef>
#include <functional>

namespace rwvd {

// Worker count: RWVD_THREADS if set to a positive integer, else hardware concurrency.
std::size_t worker_count();

// Runs body(chunk_begin, chunk_end) over [0, n) in fixed chunks of `chunk` items.
// Chunk boundaries do not depend on the worker count; callers that store results
// per chunk or per item and reduce afterwards get thread-count independent output.
void parallel_chunks(std::size_t n, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace rwvd
