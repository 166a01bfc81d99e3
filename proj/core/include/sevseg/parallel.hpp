#pragma once

#include <cstddef>
#include <functional>

namespace sevseg {

/// Worker count from SEVSEG_JOBS, else hardware concurrency (at least 1).
[[nodiscard]] unsigned default_jobs() noexcept;

/// Runs body(i) for i in [0, n) on up to `jobs` threads. Each index runs exactly
/// once; callers write results by index so output never depends on scheduling.
/// The exception from the lowest failing index is rethrown after all workers join.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body);

}  // namespace sevseg
