#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace torsion {

/// Name of the environment variable bounding worker threads.
inline constexpr const char* kThreadsEnv = "TORSION_THREADS";

inline int parallel_width()
{
    if (const char* env = std::getenv(kThreadsEnv)) {
        try {
            const int n = std::stoi(env);
            if (n >= 1)
                return n;
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates fn(i) for i in [0, count) on up to `width` threads. Results keep
/// index order; the first exception (lowest index) is rethrown.
template <class Fn>
auto parallel_map(std::size_t count, Fn&& fn, int width = parallel_width())
{
    using Result = decltype(fn(std::size_t{}));
    std::vector<Result> results(count);
    std::vector<std::exception_ptr> errors(count);
    const auto workers = static_cast<std::size_t>(std::clamp<long>(width, 1, static_cast<long>(std::max<std::size_t>(count, 1))));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                results[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return results;
}

} // namespace torsion
