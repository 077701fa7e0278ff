#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace lorenzknot {

/// Runs fn(i) for i in [0, n) across up to `jobs` threads with a static
/// block partition. Callers write results into preallocated slots, so the
/// output is independent of the worker count.
template <typename Fn>
void parallel_for(int n, int jobs, Fn&& fn) {
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int w = 0; w < jobs; ++w) {
        const int lo = static_cast<int>(static_cast<long long>(n) * w / jobs);
        const int hi = static_cast<int>(static_cast<long long>(n) * (w + 1) / jobs);
        pool.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace lorenzknot
