#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace flm {

/// Default worker count: FLMTEST_WORKERS if set to a positive integer, else 1.
unsigned default_workers() noexcept;

/// Runs body(i) for i in [0, count) on up to `workers` threads. Indices are
/// split into contiguous blocks; callers write results by index, so the
/// outcome does not depend on the worker count. The exception thrown for the
/// smallest failing index (if any) is rethrown.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const std::size_t nthreads = std::min<std::size_t>(workers, count);
    std::vector<std::exception_ptr> errors(nthreads);
    std::vector<std::size_t> failed_at(nthreads, count);
    {
        std::vector<std::jthread> threads;
        threads.reserve(nthreads);
        for (std::size_t t = 0; t < nthreads; ++t) {
            const std::size_t begin = count * t / nthreads;
            const std::size_t end = count * (t + 1) / nthreads;
            threads.emplace_back([&, t, begin, end] {
                for (std::size_t i = begin; i < end; ++i) {
                    try {
                        body(i);
                    } catch (...) {
                        errors[t] = std::current_exception();
                        failed_at[t] = i;
                        return;
                    }
                }
            });
        }
    }
    std::size_t first = count;
    std::exception_ptr err;
    for (std::size_t t = 0; t < nthreads; ++t) {
        if (errors[t] && failed_at[t] < first) {
            first = failed_at[t];
            err = errors[t];
        }
    }
    if (err) std::rethrow_exception(err);
}

}  // namespace flm
