#pragma once

#include <cstddef>
#include <functional>

namespace induced {

/// Number of workers from INDUCED_TRANSPORT_JOBS, else the hardware count.
unsigned default_jobs();

/// Runs body(i) for i in [0, count) on up to `jobs` threads. Indices are
/// handed out in increasing order; after a failure no new indices start and
/// the exception of the lowest failing index is rethrown, so the reported
/// error does not depend on scheduling.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body);

}  // namespace induced
