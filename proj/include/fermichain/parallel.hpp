#pragma once

#include <cstddef>
#include <functional>

namespace fermichain {

/// Worker count: FERMICHAIN_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

/// Runs task(i) for i in [0, count) on up to thread_count() threads.
/// Tasks must write to disjoint outputs; callers merge results in index order,
/// so the outcome does not depend on the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

}  // namespace fermichain
