#pragma once

// Deterministic work partitioning: results are written to fixed slots and
// reduced by the caller in index order, so output does not depend on the
// number of workers.

#include <cstddef>
#include <functional>

namespace gsp4 {

// Default from GSP4_THREADS (>= 1), else 1.
int worker_count();
void set_worker_count(int n);

// Calls f(i) for i in [0, n) on up to worker_count() threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace gsp4
