#include "fsqkd/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>

namespace fsqkd {

unsigned thread_budget(std::size_t work_items) {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FSQKD_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
        } catch (const std::exception&) {
            // Unparseable cap: ignore and keep the hardware default.
        }
    }
    if (work_items < n) n = static_cast<unsigned>(std::max<std::size_t>(1, work_items));
    return n;
}

} // namespace fsqkd
