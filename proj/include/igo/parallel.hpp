#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace igo {

/// Serial is the bit-reproducibility reference. Parallel paths partition work
/// so that every output slot is computed by exactly the same instruction
/// sequence as in serial mode, hence results are identical.
enum class Execution { serial, parallel };

/// Calls fn(i) for i in [0, count). In parallel mode indices are split into
/// contiguous blocks over the available hardware threads. The first exception
/// thrown by any worker is rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t count, Execution mode, Fn&& fn) {
    const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (mode == Execution::serial || hw == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min(hw, count);
    const std::size_t block = (count + workers - 1) / workers;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * block;
            const std::size_t end = std::min(count, begin + block);
            if (begin >= end) break;
            pool.emplace_back([&, begin, end] {
                try {
                    for (std::size_t i = begin; i < end; ++i) fn(i);
                } catch (...) {
                    std::scoped_lock lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace igo
