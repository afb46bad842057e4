#pragma once

#include <cstddef>
#include <functional>

namespace brc {

/// Worker count used by index-parallel loops. Defaults to BRC_THREADS or 1.
int thread_count();
void set_thread_count(int n);

/// Run fn(i) for i in [0, n). Each index must write only its own outputs,
/// so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace brc
