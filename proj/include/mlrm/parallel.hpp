#pragma once

// Small fork-join helper. Workers pull indices from a shared counter and must
// write only to their own output slots, so results do not depend on the thread
// count. MLRM_THREADS caps the pool (0 or 1 disables threading).

#include <cstddef>
#include <functional>

namespace mlrm {

// Thread budget: MLRM_THREADS if set, else hardware_concurrency().
std::size_t thread_budget();

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mlrm
