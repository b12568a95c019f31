#pragma once

#include <cstddef>
#include <functional>

namespace lsgf {

/// Worker count from LSGF_THREADS (default 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Each index must write only to its own output slot;
/// callers reduce the slots in index order so results do not depend on thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace lsgf
