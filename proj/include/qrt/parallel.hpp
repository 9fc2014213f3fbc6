#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace qrt {

// Runs fn(i) for i in [0, n). Work items must be independent and write only
// their own slots; then the result is identical for any thread count.
template <class F>
void parallel_for(int64_t n, F&& fn, int threads = 0) {
    if (n <= 0) return;
    int hw = threads > 0 ? threads : int(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (hw > n) hw = int(n);
    if (hw == 1) {
        for (int64_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<int64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::vector<std::thread> pool;
    pool.reserve(hw);
    for (int w = 0; w < hw; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int64_t i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace qrt
