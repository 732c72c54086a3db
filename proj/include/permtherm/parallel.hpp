#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace permtherm {

/// Thread count: `requested` if positive, else PERMTHERM_THREADS if set to a
/// positive integer, else the hardware concurrency (at least 1).
int resolve_threads(std::optional<int> requested = std::nullopt);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Tasks write
/// results into caller-owned slots indexed by i, so the outcome does not
/// depend on scheduling. If tasks throw, the exception of the lowest index
/// is rethrown after all workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace permtherm
