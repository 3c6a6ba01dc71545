#pragma once

#include <cstddef>
#include <functional>

namespace veemap {

// VEEMAP_THREADS if set, else hardware concurrency (at least 1)
int default_threads();

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is visited once;
// body must only write to slot i of caller-owned storage.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace veemap
