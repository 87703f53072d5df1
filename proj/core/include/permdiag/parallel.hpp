#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace permdiag {

/// Run body(i) for i in [0, n) on up to n_jobs threads. Work items must not
/// share mutable state; results written to index i belong to item i alone, so
/// the outcome is independent of scheduling. The first exception thrown by any
/// item is rethrown on the calling thread.
inline void parallel_for(std::size_t n, std::size_t n_jobs,
                         const std::function<void(std::size_t)>& body) {
    if (n == 0) return;
    if (n_jobs <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const std::size_t workers = std::min(n_jobs, n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace permdiag
