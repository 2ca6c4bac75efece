#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace netchemo {

/// Worker cap from NETCHEMO_THREADS (0 or unset = hardware concurrency).
inline std::size_t worker_count() {
    static const std::size_t count = [] {
        std::size_t n = 0;
        if (const char* env = std::getenv("NETCHEMO_THREADS")) {
            try {
                n = static_cast<std::size_t>(std::stoul(env));
            } catch (...) {
                n = 0;
            }
        }
        if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
        return n;
    }();
    return count;
}

/// Runs f(i) for i in [0, n). Work items must be independent; results do not
/// depend on the thread count. Small loops stay on the calling thread.
template <class F>
void parallel_for(std::size_t n, F&& f, std::size_t min_parallel = 16) {
    const std::size_t workers = std::min(worker_count(), n);
    if (workers <= 1 || n < min_parallel) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) f(i);
        });
    }
}

}  // namespace netchemo
