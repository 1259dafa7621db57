#include "twospec/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace twospec {

namespace {

std::atomic<int> g_threads{0};

int default_threads() noexcept {
    if (const char* env = std::getenv("TWOSPEC_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

int thread_count() noexcept {
    const int t = g_threads.load();
    return t > 0 ? t : default_threads();
}

void set_thread_count(int threads) noexcept { g_threads.store(std::max(0, threads)); }

void parallel_for(int count, const std::function<void(int)>& body) {
    if (count <= 0) return;
    const int workers = std::min(thread_count(), count);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    auto run = [&](int i) {
        try {
            body(i);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    };
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) run(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int i = next++; i < count; i = next++) run(i);
            });
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace twospec
