#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace rbfpu {

/// Environment variable overriding the worker count.
inline constexpr const char* kThreadsEnvVar = "RBFPU_NUM_THREADS";

/// Worker count: `requested` if non-zero, else $RBFPU_NUM_THREADS, else the
/// hardware concurrency (at least 1).
std::size_t resolve_thread_count(std::size_t requested = 0);

/// Runs body(i) for i in [0, count). Each index writes only its own output,
/// so results do not depend on scheduling. If bodies throw, the exception of
/// the smallest failing index is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace rbfpu
