#pragma once

#include <cstddef>
#include <functional>

namespace jamgame {

/// Environment variable that caps worker threads; 0 or unset means all cores.
inline constexpr const char* kThreadsEnv = "AOI_JAMGAME_THREADS";

/// requested > 0 wins; otherwise AOI_JAMGAME_THREADS, otherwise hardware concurrency.
unsigned resolve_workers(unsigned requested = 0);

/// Calls task(i) for every i in [0, count) on up to `workers` threads. Callers
/// write results into slot i and reduce in index order, which keeps output
/// independent of the worker count. The exception of the lowest failing index
/// is rethrown.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task);

}  // namespace jamgame
