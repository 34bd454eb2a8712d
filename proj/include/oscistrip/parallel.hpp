#pragma once

#include <cstddef>
#include <functional>

namespace oscistrip {

/// Worker count used by ensemble loops (1 = sequential).
void set_thread_count(int n);
int thread_count();

/// Runs fn(i) for i in [0, n). Each index writes only its own output slot,
/// so results do not depend on the worker count. The first exception thrown
/// by any task is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn);

} // namespace oscistrip
