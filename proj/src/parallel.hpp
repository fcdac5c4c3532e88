#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace kms::detail {

/// Run fn over [0, n) split into contiguous chunks. Chunk boundaries depend
/// only on n and threads, and chunks never share output cells, so results are
/// bitwise independent of scheduling.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
    if (threads <= 1 || n < 2) {
        fn(0, n);
        return;
    }
    const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    const std::size_t chunk = (n + t - 1) / t;
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < t; ++k) {
        const std::size_t b = k * chunk;
        const std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back(fn, b, e);
    }
    for (auto& th : pool) th.join();
}

}  // namespace kms::detail
