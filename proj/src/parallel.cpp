#include "pearcey/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace pearcey {

namespace {

int initial_thread_count() {
    if (const char* env = std::getenv("PEARCEY_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::atomic<int> g_max_threads{initial_thread_count()};

} // namespace

void set_max_threads(int n) { g_max_threads.store(n < 1 ? 1 : n); }

int max_threads() { return g_max_threads.load(); }

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
    if (n <= 0) return;
    int nthreads = max_threads();
    if (nthreads <= 1 || n == 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (nthreads > n) nthreads = static_cast<int>(n);
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::int64_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace pearcey
