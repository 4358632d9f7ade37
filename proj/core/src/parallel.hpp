#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace rttkit::detail {

/// Splits [0, count) into contiguous chunks and runs fn(begin, end) on each,
/// one worker thread per chunk. threads == 0 means hardware concurrency.
/// fn must not throw. Results must not depend on the split, so callers have
/// each index write only to its own pre-sized output slot.
template <typename Fn>
void parallel_chunks(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(threads, count == 0 ? 1 : count);
    if (workers <= 1) {
        fn(std::size_t{0}, count);
        return;
    }
    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace rttkit::detail
