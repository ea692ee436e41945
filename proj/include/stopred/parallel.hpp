#pragma once
// Deterministic chunked parallelism.  Work is split into a chunk count that
// does not depend on the worker count; per-chunk results are combined in
// chunk order, so any thread count produces identical output.

#include <cstdint>
#include <cstdlib>
#include <vector>
#include <thread>
#include <atomic>
#include <string>
#include <functional>
#include <stdexcept>

namespace stopred {

// Worker count: explicit request > STOPRED_THREADS env > hardware.
inline unsigned resolve_threads(unsigned requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("STOPRED_THREADS")) {
        long v = std::atol(env);
        if (v > 0) return unsigned(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Run fn(chunk_index) for every chunk, returning results indexed by chunk.
// Exceptions from workers are rethrown on the calling thread.
template <typename T, typename Fn>
std::vector<T> parallel_map(size_t n_chunks, unsigned threads, Fn fn) {
    std::vector<T> results(n_chunks);
    if (n_chunks == 0) return results;
    threads = std::min<size_t>(std::max(1u, threads), n_chunks);
    if (threads == 1) {
        for (size_t c = 0; c < n_chunks; ++c) results[c] = fn(c);
        return results;
    }
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                size_t c = next.fetch_add(1);
                if (c >= n_chunks || failed.load(std::memory_order_relaxed)) return;
                try {
                    results[c] = fn(c);
                } catch (const std::exception& e) {
                    if (!failed.exchange(true)) error = e.what();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed) throw std::runtime_error("parallel_map worker failed: " + error);
    return results;
}

// Sum of fn over [0, n) split into even ranges; T must be additive.
template <typename T, typename Fn>
T parallel_range_sum(uint64_t n, unsigned threads, uint64_t min_chunk, Fn fn) {
    if (n == 0) return T{};
    uint64_t chunk = std::max<uint64_t>(min_chunk, 1);
    size_t n_chunks = size_t((n + chunk - 1) / chunk);
    auto results = parallel_map<T>(n_chunks, threads, [&](size_t c) {
        uint64_t lo = uint64_t(c) * chunk, hi = std::min(n, lo + chunk);
        return fn(lo, hi);
    });
    T total{};
    for (const auto& r : results) total += r;  // fixed chunk order
    return total;
}

}  // namespace stopred
