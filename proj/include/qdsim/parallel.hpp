#pragma once

#include <cstddef>
#include <functional>

namespace qdsim {

/// Worker count: QDSIM_THREADS if set (>= 1), else hardware concurrency.
[[nodiscard]] std::size_t worker_count();

/// Calls fn(i) for i in [0, n) across worker threads. Work is handed out by
/// index, so results written to slot i do not depend on scheduling. The
/// first exception thrown by any call is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace qdsim
