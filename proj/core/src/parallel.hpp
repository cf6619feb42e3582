#pragma once

#include <cstddef>
#include <functional>

namespace powerscope::detail {

/// Worker count: POWERSCOPE_THREADS when set to a positive value, otherwise
/// (or when 0) the hardware concurrency.
std::size_t thread_budget();

/// Runs fn(0..n-1) across the thread budget. Callers write results into
/// preallocated slots indexed by i, so reductions stay deterministic no
/// matter how work is scheduled. If several calls throw, the one with the
/// lowest index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace powerscope::detail
