// Index-parallel evaluation with results stored by index, so that any
// reduction done afterwards is independent of the thread count.
#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace sfk {

// Worker count from SFK_THREADS (default 1).
inline int thread_count() {
    if (const char* s = std::getenv("SFK_THREADS")) {
        const int n = std::atoi(s);
        if (n > 0) return std::min(n, 256);
    }
    return 1;
}

template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& f) {
    std::vector<T> out(n);
    const int workers = static_cast<int>(std::min<std::size_t>(thread_count(), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) out[i] = f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!err) err = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
    return out;
}

// Pairwise summation in index order.
inline double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

}  // namespace sfk
