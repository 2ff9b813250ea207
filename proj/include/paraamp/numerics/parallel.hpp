#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace paraamp::numerics {

/// Environment variable that caps worker threads for sweeps.
inline constexpr const char* kThreadsEnv = "PARAAMP_THREADS";

/// Worker count from PARAAMP_THREADS, else the hardware concurrency.
inline std::size_t default_thread_count() {
    if (const char* env = std::getenv(kThreadsEnv); env != nullptr && *env != '\0') {
        try {
            const long n = std::stol(env);
            if (n > 0) {
                return static_cast<std::size_t>(n);
            }
        } catch (const std::exception&) {
            // fall through to the hardware default
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Evaluates `f(i)` for i in [0, n) and returns the results in index order.
///
/// Work is handed out through an atomic counter, so the assignment of indices
/// to threads varies between runs but each slot is written exactly once and
/// the output never depends on it. If any call throws, the exception of the
/// lowest failing index is rethrown after all workers have joined.
template <typename R, typename F>
std::vector<R> parallel_map(std::size_t n, F&& f, std::size_t threads = default_thread_count()) {
    std::vector<R> out(n);
    std::vector<std::exception_ptr> errors(n);
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));

    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = f(i);
        }
        return out;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

}  // namespace paraamp::numerics
