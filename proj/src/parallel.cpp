#include "dxpipe/parallel.hpp"

namespace dxpipe {

namespace {
int g_thread_override = 0;
}

void set_threads(int n) {
    g_thread_override = n;
#ifdef _OPENMP
    if (n > 0) {
        omp_set_num_threads(n);
    } else {
        omp_set_num_threads(omp_get_num_procs());
    }
#endif
}

int max_threads() {
#ifdef _OPENMP
    return g_thread_override > 0 ? g_thread_override : omp_get_max_threads();
#else
    (void)g_thread_override;
    return 1;
#endif
}

}  // namespace dxpipe
