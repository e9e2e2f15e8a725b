#pragma once

#include <cstddef>
#include <functional>

namespace tabula {

/// Worker cap: TABULA_THREADS when set to a positive integer, otherwise the
/// hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Each index runs exactly once; callers write
/// results into per-index slots so output does not depend on scheduling.
/// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tabula
