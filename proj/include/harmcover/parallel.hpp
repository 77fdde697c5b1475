#pragma once

#include <cstddef>
#include <functional>

namespace harmcover {

/// Worker count: HARMCOVER_THREADS if set (>= 1), else hardware concurrency.
std::size_t threadCount();

/// Overrides threadCount(); 0 restores the default.
void setThreadCount(std::size_t n);

/// Runs body(i) for i in [0, n). Iterations must not share mutable state;
/// results are written to per-index slots so the outcome is deterministic.
void parallelFor(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace harmcover
