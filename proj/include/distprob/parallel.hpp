#pragma once

#include <cstddef>
#include <functional>

namespace distprob {

/// Worker count: DISTPROB_THREADS if set to a positive integer, otherwise
/// the hardware concurrency.
std::size_t thread_count();

/// Runs fn(i) for every i in [0, n). Indices are split into contiguous
/// chunks; each index must write only its own outputs, which keeps results
/// independent of the number of threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace distprob
