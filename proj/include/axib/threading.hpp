#pragma once

#include <cstddef>
#include <functional>

namespace axib {

// Worker cap: AXIB_THREADS env var, 0 or unset means hardware concurrency.
std::size_t worker_count();

// Splits [0, n) into contiguous chunks and runs body(begin, end) on each,
// possibly from several threads. The chunk decomposition is fixed (independent
// of the thread count), so per-chunk accumulations combine deterministically.
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace axib
