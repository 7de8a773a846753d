#pragma once
// Deterministic chunked parallelism. Work is split into fixed-size chunks
// whose boundaries do not depend on the thread count; workers grab chunk
// indices from an atomic counter and per-chunk results are merged in chunk
// order by the caller. Hence outputs are identical for any --threads value.

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

#include "liouville/common.hpp"

namespace liouville {

inline unsigned resolve_threads(int requested) {
    if (requested > 0) return static_cast<unsigned>(requested);
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

// Runs fn(chunk_index) for chunk_index in [0, num_chunks) on `threads`
// workers. fn must only touch per-chunk state (e.g. results[chunk_index]).
inline void run_chunks(u64 num_chunks, unsigned threads,
                       const std::function<void(u64)>& fn) {
    if (num_chunks == 0) return;
    if (threads <= 1 || num_chunks == 1) {
        for (u64 c = 0; c < num_chunks; ++c) fn(c);
        return;
    }
    std::atomic<u64> next{0};
    auto worker = [&] {
        for (;;) {
            u64 c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= num_chunks) break;
            fn(c);
        }
    };
    unsigned n = threads < num_chunks ? threads : static_cast<unsigned>(num_chunks);
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

// Splits the inclusive integer range [lo, hi] into chunks of `chunk_len`
// values and calls fn(chunk_index, chunk_lo, chunk_hi) deterministically.
inline void run_range_chunks(u64 lo, u64 hi, u64 chunk_len, unsigned threads,
                             const std::function<void(u64, u64, u64)>& fn) {
    if (lo > hi) return;
    u64 total = hi - lo + 1;
    u64 chunks = ceil_div(total, chunk_len);
    run_chunks(chunks, threads, [&](u64 c) {
        u64 clo = lo + c * chunk_len;
        u64 chi = clo + chunk_len - 1;
        if (chi > hi || chi < clo) chi = hi;
        fn(c, clo, chi);
    });
}

} // namespace liouville
