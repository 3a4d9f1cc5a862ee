#pragma once

#include <cstddef>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dxpipe {

// 0 restores the OpenMP default.
void set_threads(int n);
int max_threads();

// Runs fn(i) for i in [0, n). Iterations must be independent and write only
// to their own slots; merge order is then the caller's, so results are
// identical for any thread count.
template <class Fn>
void parallel_for(std::ptrdiff_t n, Fn&& fn) {
    std::exception_ptr err = nullptr;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            fn(i);
        } catch (...) {
#pragma omp critical(dxpipe_parallel_for_err)
            {
                if (!err) err = std::current_exception();
            }
        }
    }
#else
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            fn(i);
        } catch (...) {
            if (!err) err = std::current_exception();
        }
    }
#endif
    if (err) std::rethrow_exception(err);
}

}  // namespace dxpipe
