#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace alphaflow
{

/// Worker count: requested if positive, otherwise hardware concurrency
inline unsigned worker_count(int requested = 0)
{
    if (requested > 0) {
        return static_cast<unsigned>(requested);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/**
 * @brief Run body(i) for i in [0, n) on a pool of threads
 *
 * Each index writes only its own output slot, so results do not depend on
 * scheduling. The first exception thrown by any body is rethrown.
 */
template <class Body>
void parallel_for(std::size_t n, Body&& body, int workers = 0)
{
    const unsigned w = std::min<std::size_t>(worker_count(workers), std::max<std::size_t>(n, 1));
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (unsigned k = 0; k < w; ++k) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                }
                catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace alphaflow
