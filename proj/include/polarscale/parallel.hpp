#pragma once

// Static chunked parallel loop. Chunk boundaries depend only on the range and
// the thread count, and callers write to disjoint slots, so results do not
// depend on scheduling.

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace polarscale {

template <class Fn>
void parallel_for(std::size_t begin, std::size_t end, unsigned threads, Fn&& fn)
{
    if (end <= begin)
        return;
    std::size_t count = end - begin;
    if (threads <= 1 || count < 2 * static_cast<std::size_t>(threads)) {
        fn(begin, end);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t lo = begin + t * chunk;
        std::size_t hi = lo + chunk < end ? lo + chunk : end;
        if (lo >= hi)
            break;
        pool.emplace_back([&, t, lo, hi] {
            try {
                fn(lo, hi);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace polarscale
