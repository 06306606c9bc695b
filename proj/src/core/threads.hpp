#pragma once

#include <cstddef>
#include <functional>

namespace hs::threads {

// worker count: HYPERSPIN_THREADS if set, else hardware concurrency
int worker_count();

// run fn(i) for i in [0, n); splits into contiguous blocks across workers
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace hs::threads
