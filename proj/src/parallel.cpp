#include "ecdflab/parallel.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ecdflab {

void parallel_for(std::int64_t count, unsigned threads, const std::function<void(std::int64_t)>& body) {
    if (count <= 0) {
        return;
    }
    const std::int64_t workers =
        std::min<std::int64_t>(std::max(1u, threads), count);
    if (workers == 1) {
        for (std::int64_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }

    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (std::int64_t w = 0; w < workers; ++w) {
        // Contiguous block per worker; indices never overlap.
        const std::int64_t lo = count * w / workers;
        const std::int64_t hi = count * (w + 1) / workers;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::int64_t i = lo; i < hi; ++i) {
                    body(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : pool) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

}  // namespace ecdflab
