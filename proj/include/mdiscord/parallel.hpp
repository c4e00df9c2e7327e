#pragma once

#include <cstddef>
#include <functional>

namespace mdiscord {

/// Worker count: hardware concurrency, capped by MDISCORD_THREADS when set.
int worker_count();

/// Calls body(i) for every i in [0, count) across worker_count() threads.
/// body must be safe to run concurrently; the first exception is rethrown
/// after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace mdiscord
