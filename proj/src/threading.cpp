#include "axib/threading.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace axib {

std::size_t worker_count() {
    static const std::size_t cached = [] {
        std::size_t n = 0;
        if (const char* env = std::getenv("AXIB_THREADS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && v > 0) n = static_cast<std::size_t>(v);
        }
        if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
        return n;
    }();
    return cached;
}

void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;

    // Fixed decomposition: chunk boundaries depend only on n, never on the
    // worker count, so reductions that combine per-chunk results in chunk
    // order are reproducible across machines and AXIB_THREADS settings.
    constexpr std::size_t max_chunks = 64;
    const std::size_t n_chunks = std::min(n, max_chunks);

    auto chunk_range = [&](std::size_t c) {
        std::size_t lo = n * c / n_chunks;
        std::size_t hi = n * (c + 1) / n_chunks;
        return std::pair<std::size_t, std::size_t>(lo, hi);
    };

    const std::size_t workers = std::min(worker_count(), n_chunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) {
            auto [lo, hi] = chunk_range(c);
            body(lo, hi);
        }
        return;
    }

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t c = w; c < n_chunks; c += workers) {
                auto [lo, hi] = chunk_range(c);
                body(lo, hi);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace axib
