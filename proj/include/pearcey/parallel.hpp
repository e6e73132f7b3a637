#ifndef PEARCEY_PARALLEL_HPP
#define PEARCEY_PARALLEL_HPP

#include <cstdint>
#include <functional>

namespace pearcey {

// Global cap on worker threads. Defaults to the hardware count, overridable
// by set_max_threads() or the PEARCEY_THREADS environment variable.
// Work items write to disjoint output slots, so results do not depend on
// the thread count.
void set_max_threads(int n);
int max_threads();

/// Runs fn(i) for i in [0, n). Each index must touch only its own outputs.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

} // namespace pearcey

#endif
