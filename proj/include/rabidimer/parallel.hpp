// parallel.hpp — minimal index-range parallelism for independent work items

#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace rabidimer {

inline int hardware_workers() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

// Runs fn(i) for i in [0, count) on up to `workers` threads. Each index is
// claimed exactly once, so writes into per-index output slots are race-free
// and results do not depend on the worker count. The first exception thrown
// by any item is rethrown on the calling thread after all workers join.
inline void parallel_for(std::int64_t count, int workers,
                         const std::function<void(std::int64_t)>& fn) {
    if (count <= 0) return;
    if (workers <= 0) workers = hardware_workers();
    if (workers > count) workers = static_cast<int>(count);

    if (workers == 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers) - 1);
    for (int t = 0; t + 1 < workers; ++t) threads.emplace_back(worker);
    worker();
    for (auto& th : threads) th.join();

    if (error) std::rethrow_exception(error);
}

} // namespace rabidimer
