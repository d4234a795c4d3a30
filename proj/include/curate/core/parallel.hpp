#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace curate {

// Runs fn(i) for every i in [0, count) across up to `workers` threads
// (0 = hardware concurrency). Callers index results by i, so output never
// depends on scheduling. The first exception from fn is rethrown after all
// threads join.
template <typename Fn>
void parallel_for(size_t count, size_t workers, Fn&& fn) {
    if (count == 0) return;
    size_t n = workers == 0 ? std::thread::hardware_concurrency() : workers;
    n = std::max<size_t>(1, std::min(n, count));
    if (n == 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;
    auto body = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const size_t i = cursor.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (size_t w = 0; w < n; ++w) pool.emplace_back(body);
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

template <typename T, typename Fn>
std::vector<T> parallel_map(size_t count, size_t workers, Fn&& fn) {
    std::vector<T> out(count);
    parallel_for(count, workers, [&](size_t i) { out[i] = fn(i); });
    return out;
}

}  // namespace curate
