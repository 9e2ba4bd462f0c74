#pragma once

#include <cstdint>
#include <exception>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace langesim {

// How independent work items (sweep points, replicas) are executed. Work
// item i always writes to slot i of its output, and reductions run in index
// order afterwards, so both policies produce bit-identical results.
enum class Execution { serial, parallel };

struct ExecPolicy {
    Execution mode = Execution::parallel;
    int threads = 0;  // 0: OpenMP default

    static ExecPolicy serial() { return {Execution::serial, 1}; }
    static ExecPolicy parallel(int threads = 0) { return {Execution::parallel, threads}; }
};

inline int available_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Calls fn(i) for i in [0, n). On failure the exception of the smallest
// failing index is rethrown after all items have finished.
template <class Fn>
void for_each_index(const ExecPolicy& policy, std::int64_t n, Fn&& fn) {
    if (n <= 0) return;
    if (policy.mode == Execution::serial) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr first_error;
    std::int64_t first_index = std::numeric_limits<std::int64_t>::max();
    const int threads = policy.threads > 0 ? policy.threads : available_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            fn(i);
        } catch (...) {
#pragma omp critical(langesim_for_each_index)
            {
                if (i < first_index) {
                    first_index = i;
                    first_error = std::current_exception();
                }
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

// Evaluates fn(i) for every index and returns the results in index order.
template <class T, class Fn>
std::vector<T> map_indices(const ExecPolicy& policy, std::int64_t n, Fn&& fn) {
    std::vector<T> out(static_cast<std::size_t>(n > 0 ? n : 0));
    for_each_index(policy, n, [&](std::int64_t i) { out[static_cast<std::size_t>(i)] = fn(i); });
    return out;
}

}  // namespace langesim
