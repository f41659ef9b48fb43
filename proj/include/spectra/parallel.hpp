#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace spectra {

// Runs fn(chunk) for chunk = 0..nchunks−1 on a few worker threads. Chunk boundaries are
// fixed by the caller, so reducing per-chunk results in chunk order is bit-reproducible
// regardless of the thread count.
template <class F>
void parallel_chunks(std::size_t nchunks, F&& fn) {
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t nthreads = std::min(hw, nchunks);
    if (nthreads <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c) fn(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t)
        pool.emplace_back([&] {
            for (std::size_t c = next++; c < nchunks; c = next++) fn(c);
        });
    for (auto& th : pool) th.join();
}

}  // namespace spectra
