#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace randsrc::detail {

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Path-level work distribution in fixed chunks. Workers pull chunk indices
/// from an atomic counter; outputs must go to per-item (or per-chunk) slots so
/// the result does not depend on the schedule. make_ctx() runs once per worker
/// thread for reusable scratch (solvers, factorizations).
template <class MakeCtx, class Body>
void parallel_path_loop(int items, int chunk_size, int workers, MakeCtx make_ctx, Body body) {
    workers = resolve_workers(workers);
    const int chunks = (items + chunk_size - 1) / chunk_size;
    if (workers <= 1 || chunks <= 1) {
        auto ctx = make_ctx();
        for (int i = 0; i < items; ++i) body(ctx, i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        try {
            auto ctx = make_ctx();
            for (;;) {
                const int c = next.fetch_add(1);
                if (c >= chunks) break;
                const int begin = c * chunk_size;
                const int end = std::min(items, begin + chunk_size);
                for (int i = begin; i < end; ++i) body(ctx, i);
            }
        } catch (...) {
            std::scoped_lock lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// Recursive pairwise sum; order is fixed by the layout, not the schedule.
inline double pairwise_sum(const double* data, int n) {
    if (n <= 8) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const int half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

}  // namespace randsrc::detail
