#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "proxmc/errors.hpp"

namespace proxmc {

/* Run `fn(i)` for i in [0, n) on a fixed-size pool of worker threads.
 *
 * Work items are claimed through an atomic counter, so scheduling order is
 * nondeterministic, but each item sees only its own index: as long as fn(i)
 * derives all randomness from i (e.g. one RNG stream per chain) the combined
 * result is byte-identical for every pool size, including 1.
 *
 * The first exception thrown by any item is captured and rethrown on the
 * calling thread after all workers join.
 */
template <typename Fn>
void parallel_for_ordered(std::size_t n, std::size_t n_threads, Fn&& fn) {
    if (n_threads == 0) throw config_error("parallel_for_ordered: n_threads must be >= 1");
    if (n == 0) return;
    if (n_threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> threads;
    const std::size_t spawn = n_threads < n ? n_threads : n;
    threads.reserve(spawn);
    for (std::size_t t = 0; t < spawn; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace proxmc
