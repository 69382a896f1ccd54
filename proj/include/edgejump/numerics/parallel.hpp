#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace edgejump {

/// Worker count: EDGEJUMP_THREADS if set and positive, else hardware concurrency.
inline unsigned thread_budget() {
    if (const char* env = std::getenv("EDGEJUMP_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// out[i] = f(i) for i < count. Results are placed by index, so ordering does not
/// depend on scheduling. The first exception thrown by any task is rethrown.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, F&& f, unsigned threads = thread_budget()) {
    std::vector<T> out(count);
    threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errs(threads);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i; (i = next.fetch_add(1)) < count;) out[i] = f(i);
            } catch (...) {
                errs[w] = std::current_exception();
                next = count;
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace edgejump
