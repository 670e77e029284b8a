#pragma once

// Deterministic fork-join over contiguous index ranges. Work item i always
// lands in the chunk [c*n/W, (c+1)*n/W) containing it, chunks are handed to
// workers in order, and any per-chunk results the caller gathers in chunk
// order are therefore reproducible: chunk concatenation preserves ascending
// index order for every worker count.

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace lagrmc {

// Calls body(lo, hi, chunk_index) for each of `workers` contiguous chunks of
// [0, n). workers <= 1 runs inline. The first exception thrown by any chunk
// is rethrown on the calling thread after all workers joined.
inline void parallel_for_chunks(std::size_t n, int workers,
                                const std::function<void(std::size_t, std::size_t, int)>& body) {
    if (n == 0) return;
    if (workers < 1) workers = 1;
    if (static_cast<std::size_t>(workers) > n) workers = static_cast<int>(n);

    if (workers == 1) {
        body(0, n, 0);
        return;
    }

    std::exception_ptr first_error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (int c = 0; c < workers; ++c) {
            const std::size_t lo = n * static_cast<std::size_t>(c) / workers;
            const std::size_t hi = n * static_cast<std::size_t>(c + 1) / workers;
            pool.emplace_back([&, lo, hi, c] {
                try {
                    body(lo, hi, c);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        }
    } // jthreads join here
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace lagrmc
