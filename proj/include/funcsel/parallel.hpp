#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace funcsel {

/// Worker count: FUNCSEL_THREADS when set and positive, else hardware
/// concurrency, never more than `jobs`.
inline int worker_count(long jobs) {
    long n = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("FUNCSEL_THREADS")) {
        const long v = std::atol(env);
        if (v > 0) n = v;
    }
    if (n < 1) n = 1;
    return static_cast<int>(std::min<long>(n, jobs));
}

/// Runs body(i) for i in [0, jobs). Jobs must be independent; exceptions in
/// workers are rethrown on the calling thread (first one wins).
inline void parallel_for(long jobs, const std::function<void(long)>& body) {
    const int workers = worker_count(jobs);
    if (workers <= 1) {
        for (long i = 0; i < jobs; ++i) body(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const long i = next.fetch_add(1);
                if (i >= jobs) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace funcsel
