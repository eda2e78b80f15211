#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace imgtn {

/// Resolves a --jobs style request: values <= 0 mean "all hardware threads".
inline int resolve_jobs(int jobs) {
    if (jobs > 0) return jobs;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// out[t] = fn(t) for t in [0, count). Results land by index, so the output does not
/// depend on the number of workers. The first exception thrown by fn is rethrown.
template <class F>
auto parallel_map(std::size_t count, int jobs, F&& fn) {
    using R = std::invoke_result_t<F&, std::size_t>;
    std::vector<R> out(count);
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(resolve_jobs(jobs)), count);
    if (workers <= 1) {
        for (std::size_t t = 0; t < count; ++t) out[t] = fn(t);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t t; (t = next++) < count;) {
                    try {
                        out[t] = fn(t);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

} // namespace imgtn
