#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace keplerkit::parallel {

/// Worker cap: KEPLER_KIT_THREADS if set, else hardware concurrency.
inline unsigned worker_cap() {
    if (const char* env = std::getenv("KEPLER_KIT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

/// Index-sliced parallel loop; each index writes only its own slot, so the
/// result is schedule-independent.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const unsigned workers = std::min<std::size_t>(worker_cap(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < n; i += workers) body(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace keplerkit::parallel
