#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace weavecurv {

// Worker count: WEAVECURV_THREADS caps it, hardware concurrency is the
// default, and anything unparseable falls back to 1.
inline unsigned thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const char* env = std::getenv("WEAVECURV_THREADS");
    if (env && *env) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1) return static_cast<unsigned>(v) < hw
                                               ? static_cast<unsigned>(v)
                                               : hw;
        return 1;
    }
    return hw;
}

// Runs f(i) for i in [0, count); work is split into contiguous chunks,
// one per worker.  With a single worker everything runs inline.
template <class F>
void parallel_for(std::size_t count, F&& f) {
    const unsigned workers = thread_budget();
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    const std::size_t nw = std::min<std::size_t>(workers, count);
    std::vector<std::thread> pool;
    pool.reserve(nw);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (std::size_t w = 0; w < nw; ++w) {
        pool.emplace_back([&, w]() {
            const std::size_t lo = count * w / nw;
            const std::size_t hi = count * (w + 1) / nw;
            try {
                for (std::size_t i = lo; i < hi; ++i) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace weavecurv
