#pragma once

#include <functional>

namespace aqopt {

// Runs fn(0..n-1) on up to `threads` workers (hardware count when <= 0).
// Callers own determinism: reductions must combine results by index, never
// by completion order.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

int default_thread_count();

}  // namespace aqopt
