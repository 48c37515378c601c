#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace npg {

// Runs fn(i) for i in [0, count). Iterations must be independent and write to
// disjoint locations; results are then identical to the serial loop regardless
// of thread count. Inside an existing parallel region the loop runs serial
// (no nested teams), which keeps nested calls deterministic too.
template <typename Fn>
inline void parallel_for(int64_t count, Fn&& fn) {
#ifdef _OPENMP
    if (!omp_in_parallel()) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
#endif
    for (int64_t i = 0; i < count; ++i) fn(i);
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace npg
