#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace pairlim {

/// Worker count: hardware concurrency, capped by PAIRLIM_THREADS when set.
inline std::size_t worker_count() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("PAIRLIM_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
        } catch (const std::exception&) {
        }
    }
    return n;
}

/// Runs body(i) for i in [0, count) on up to worker_count() threads. The first
/// exception thrown by any task is rethrown after all workers join.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
    const std::size_t workers = std::min(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace pairlim
