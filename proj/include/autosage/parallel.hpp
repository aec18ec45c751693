#pragma once

#include <cstddef>
#include <functional>

namespace autosage {

// Logical cores on this host, at least 1.
std::size_t default_workers();

// Runs fn(task) for task in [0, n_tasks) on up to max_workers workers
// (0 = default_workers()). Tasks are claimed dynamically; the mapping of
// task index to data must make outputs disjoint, so results do not depend
// on which worker runs which task. Blocks until all tasks finish.
// Not reentrant: kernels never nest parallel sections.
void parallel_for(std::size_t n_tasks, std::size_t max_workers,
                  const std::function<void(std::size_t)>& fn);

} // namespace autosage
