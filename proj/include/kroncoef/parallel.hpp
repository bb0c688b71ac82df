#pragma once

#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace kroncoef {

/// Resolves a requested thread count: values <= 0 mean "use the hardware".
inline int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(begin, end) over contiguous chunks covering [0, total).
///
/// Chunk boundaries depend only on (total, threads), and callers must keep
/// chunk results independent (disjoint writes or order-independent integer
/// reductions), so the overall result is identical at any thread count.
template <class Fn>
void parallel_chunks(std::int64_t total, int threads, Fn&& fn) {
    threads = resolve_thread_count(threads);
    if (total <= 0) return;
    if (threads == 1 || total < 2) {
        fn(std::int64_t{0}, total);
        return;
    }
    const int chunks = static_cast<int>(std::min<std::int64_t>(threads, total));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(chunks) - 1);
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto run = [&](int c) {
        const std::int64_t begin = total * c / chunks;
        const std::int64_t end = total * (c + 1) / chunks;
        try {
            fn(begin, end);
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };
    for (int c = 1; c < chunks; ++c) pool.emplace_back(run, c);
    run(0);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace kroncoef
