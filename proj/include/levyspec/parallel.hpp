#ifndef LEVYSPEC_PARALLEL_HPP
#define LEVYSPEC_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace levyspec {

/// Worker count from LEVYSPEC_WORKERS, else the hardware concurrency (>= 1).
unsigned default_workers();

/// Splits [0, n) into at most `workers` contiguous chunks and runs
/// body(begin, end) on each. Chunk boundaries depend only on n and workers.
/// The exception from the lowest-indexed failing chunk is rethrown.
void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace levyspec

#endif  // LEVYSPEC_PARALLEL_HPP
