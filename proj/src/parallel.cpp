#include "syv/parallel.hpp"

#include <cmath>

namespace syv::par {

namespace {
int g_max_threads = 0;
}

void set_max_threads(int n) { g_max_threads = n < 0 ? 0 : n; }

int max_threads()
{
#ifdef _OPENMP
    return g_max_threads > 0 ? g_max_threads : omp_get_max_threads();
#else
    return 1;
#endif
}

double accumulate(const std::vector<double>& terms)
{
    double sum = 0.0, comp = 0.0;
    for (double x : terms) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

} // namespace syv::par
