#pragma once

#include <cstddef>
#include <functional>

namespace proxy_sa {

// Worker count: min(hardware_concurrency, PROXY_SA_THREADS) with a floor of 1.
int worker_count();

// Runs fn(chunk_index, begin, end) over [0, total) split into fixed-size
// chunks. Chunk boundaries depend only on `total` and `chunk_size`, never on
// the worker count, so per-chunk results combined in chunk order give
// identical output for any number of threads.
void parallel_for_chunks(std::size_t total, std::size_t chunk_size,
                         const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace proxy_sa
