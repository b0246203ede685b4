#pragma once

#include <cstddef>
#include <functional>

namespace embalign {

/// Runs fn(0..count-1) on up to `jobs` threads. Each index is handled
/// exactly once; callers write results into slot i so output order never
/// depends on scheduling. If any call throws, the exception from the lowest
/// failing index is rethrown after all workers finish.
void parallel_for(std::size_t jobs, std::size_t count,
                  const std::function<void(std::size_t)>& fn);

}  // namespace embalign
