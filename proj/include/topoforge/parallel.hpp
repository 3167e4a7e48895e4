#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace topoforge {

// requested > 0 wins, then TOPOFORGE_THREADS, then hardware concurrency.
inline int resolve_threads(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("TOPOFORGE_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Splits [begin, end) into `chunks` contiguous ranges, evaluates fn(lo, hi) -> T on
// up to `threads` workers and folds the partials in range order. The result depends
// on `chunks` only, never on the thread count.
template <class T, class Fn, class Fold>
T parallel_reduce(std::uint64_t begin, std::uint64_t end, int threads, int chunks, T init, Fn fn, Fold fold) {
    if (end <= begin) return init;
    chunks = static_cast<int>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(chunks, end - begin)));
    threads = std::max(1, std::min(threads, chunks));
    std::vector<T> part(chunks, init);
    std::vector<std::exception_ptr> err(chunks);
    const std::uint64_t len = end - begin;
    auto lo_of = [&](int c) { return begin + len * static_cast<std::uint64_t>(c) / static_cast<std::uint64_t>(chunks); };
    auto worker = [&](int t) {
        for (int c = t; c < chunks; c += threads) {
            try {
                part[c] = fn(lo_of(c), lo_of(c + 1));
            } catch (...) {
                err[c] = std::current_exception();
            }
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    for (auto& e : err)
        if (e) std::rethrow_exception(e);
    T acc = init;
    for (auto& p : part) acc = fold(acc, p);
    return acc;
}

} // namespace topoforge
