#include "rffmd/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace rffmd {
namespace {

std::atomic<int> g_override{0};
thread_local bool t_inside_parallel = false;

int default_threads() {
    if (const char* env = std::getenv("RFFMD_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace

int thread_count() {
    const int o = g_override.load();
    return o > 0 ? o : default_threads();
}

void set_thread_count(int n) { g_override.store(std::max(0, n)); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    if (n == 0) return;
    const std::size_t workers =
        std::min<std::size_t>(n, static_cast<std::size_t>(thread_count()));
    if (workers <= 1 || t_inside_parallel) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        t_inside_parallel = true;
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(n);
            }
        }
        t_inside_parallel = false;
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

Range partition_range(std::size_t n, std::size_t parts, std::size_t p) {
    const std::size_t base = n / parts;
    const std::size_t extra = n % parts;
    const std::size_t begin = p * base + std::min(p, extra);
    return {begin, begin + base + (p < extra ? 1 : 0)};
}

} // namespace rffmd
