#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace regsim {

/// Worker count for `requested`; 0 means the hardware concurrency.
inline int resolve_jobs(int requested)
{
    if (requested > 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/**
 * Calls task(i) for every i in [0, count) on up to `jobs` threads. Work items
 * are claimed from a shared counter, so callers must write results into
 * slots indexed by i. The first exception stops further claims and is
 * rethrown after all workers join.
 */
template <typename Task>
void parallel_for(std::size_t count, int jobs, Task&& task)
{
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(resolve_jobs(jobs)), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            task(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                failed = true;
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back(worker);
    pool.clear();

    if (error)
        std::rethrow_exception(error);
}

} // namespace regsim
