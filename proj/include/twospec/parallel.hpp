#pragma once

#include <functional>

namespace twospec {

// Worker count used by the sweeps; defaults to TWOSPEC_THREADS or the
// hardware concurrency. Results never depend on this value.
int thread_count() noexcept;
void set_thread_count(int threads) noexcept;  // <= 0 restores the default

// Runs body(i) for i in [0, count). Each index writes only its own output
// slot, so results are identical for any thread count. The exception of the
// lowest failing index is rethrown.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace twospec
