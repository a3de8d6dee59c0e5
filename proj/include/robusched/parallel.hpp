#ifndef ROBUSCHED_PARALLEL_HPP
#define ROBUSCHED_PARALLEL_HPP

#ifdef _OPENMP
#include <omp.h>
#endif

namespace robusched {

// Execution policy for the data-parallel kernels. Every kernel keeps a
// plain serial loop as the reference implementation; the parallel path
// must produce bit-identical results (tests enforce this).
enum class Exec { Serial, Parallel };

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace robusched

#endif
