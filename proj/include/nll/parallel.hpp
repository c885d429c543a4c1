#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace nll {

// Worker count: NLL_JOBS env var if set, else hardware concurrency.
int default_jobs();

// Runs body(i) for i in [0, count) across `jobs` threads. Results must be
// written to index i of a pre-sized container so output order never depends
// on scheduling. The lowest-index exception is rethrown after all workers
// join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  int jobs = 0);

}  // namespace nll
