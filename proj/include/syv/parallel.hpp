#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace syv::par {

// Worker cap for node-parallel loops. 0 means "use the OpenMP default".
void set_max_threads(int n);
int max_threads();

// Node-parallel map. Every iteration must write only to its own slots;
// reductions go through accumulate() below so results do not depend on
// the thread count.
template <typename F>
void for_each(std::size_t count, F&& body)
{
#ifdef _OPENMP
    const int nt = max_threads();
#pragma omp parallel for schedule(static) num_threads(nt > 0 ? nt : omp_get_max_threads())
    for (long long i = 0; i < static_cast<long long>(count); ++i)
        body(static_cast<std::size_t>(i));
#else
    for (std::size_t i = 0; i < count; ++i)
        body(i);
#endif
}

// Serial reference driver. Kept so tests and the benchmark can compare the
// parallel path against a fixed-order execution of the same body.
template <typename F>
void for_each_serial(std::size_t count, F&& body)
{
    for (std::size_t i = 0; i < count; ++i)
        body(i);
}

// Fixed-order compensated (Neumaier) sum; deterministic for any thread count.
double accumulate(const std::vector<double>& terms);

} // namespace syv::par
