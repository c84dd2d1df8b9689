#pragma once

#include <cstddef>
#include <functional>

namespace wodzicki {

/// Worker count: set_thread_count() if called, else the hardware thread count
/// capped by WODZICKI_THREADS.
int thread_count();
void set_thread_count(int n);

/// Runs body(i) for i in [0, n). Every index is processed exactly once; callers
/// write into per-index slots so results do not depend on the schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace wodzicki
