#pragma once

#include <cstddef>
#include <exception>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace persona_audit {

/// Runs fn(i) for i in [0, n) on at most max_parallel threads. Exceptions are
/// captured per index and the first one is rethrown after the loop, so a
/// throwing body never crosses the parallel region boundary.
template <typename Fn>
void parallel_for_bounded(std::size_t n, int max_parallel, Fn&& fn) {
    if (n == 0) return;
    if (max_parallel < 1) max_parallel = 1;
    std::vector<std::exception_ptr> errors(n);
#ifdef _OPENMP
    const int threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(max_parallel), n));
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
#else
    for (std::size_t i = 0; i < n; ++i) {
        try {
            fn(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
#endif
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace persona_audit
