#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace popanchor {

// Runs body(begin, end) over even chunks of [0, n). Used only for per-element
// pure work, so results do not depend on the chunking.
template <class F>
void parallel_for(std::size_t n, int threads, F&& body) {
    if (n == 0) return;
    std::size_t t = threads <= 1 ? 1 : static_cast<std::size_t>(threads);
    if (t > n) t = n;
    if (t == 1) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(t);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    std::size_t chunk = (n + t - 1) / t;
    for (std::size_t k = 0; k < t; ++k) {
        std::size_t begin = k * chunk;
        std::size_t end = begin + chunk < n ? begin + chunk : n;
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace popanchor
