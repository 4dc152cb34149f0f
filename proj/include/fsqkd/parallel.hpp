#pragma once
// fsqkd/parallel.hpp - Worker-count policy shared by the sweep and Monte
// Carlo modules. FSQKD_THREADS caps parallelism; results never depend on the
// worker count.

#include <cstddef>

namespace fsqkd {

/// Threads to use for `work_items` independent tasks: hardware concurrency,
/// capped by the FSQKD_THREADS environment variable when set (minimum 1).
unsigned thread_budget(std::size_t work_items);

} // namespace fsqkd
