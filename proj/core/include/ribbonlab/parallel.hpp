#pragma once

#include <cstddef>
#include <functional>

namespace ribbonlab {

// Worker count: RIBBONLAB_THREADS if set (>= 1), otherwise hardware concurrency.
unsigned thread_count();

// Runs f(i) for i in [0, n) on up to thread_count() threads. Each index is visited once;
// results must be written to disjoint slots so output does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace ribbonlab
