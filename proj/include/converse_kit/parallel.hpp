#pragma once

#include <cstddef>
#include <functional>

namespace converse_kit {

/// Worker threads for `tasks` independent jobs: hardware concurrency, capped
/// by the CONVERSE_KIT_THREADS environment variable and by `tasks`.
std::size_t worker_count(std::size_t tasks);

/// Runs body(i) for i in [0, count). Each index is handled exactly once and
/// results are expected in per-index slots, so output does not depend on
/// scheduling. The exception from the lowest failing index is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace converse_kit
