#pragma once

#include <cstddef>
#include <functional>

namespace dscert {

/// Resolves a requested worker count: values <= 0 mean hardware concurrency.
int resolve_workers(int requested);

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Work items
/// must be independent; callers write results into preassigned slots so the
/// outcome does not depend on scheduling. Exceptions are captured and the
/// first one (by item index) is rethrown.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace dscert
