#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace tuckercert {

// TUCKERCERT_THREADS overrides the hardware count
inline unsigned worker_count() {
    if (const char* env = std::getenv("TUCKERCERT_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// fn(i) for i in [0, n); each index runs exactly once, results are written by index
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    unsigned w = std::min<std::size_t>(worker_count(), n ? n : 1);
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < w; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += w) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace tuckercert
