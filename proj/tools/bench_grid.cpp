// Compares the serial reference against the OpenMP kernels on the grid
// assembly, pointwise reconstruction and residual evaluation.
#include "bkm/pipeline.hpp"
#include "bkm/residuals.hpp"
#include "bkm/scenario.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    const char* name = argc > 1 ? argv[1] : "kb-exact";
    bkm::Scenario s = bkm::preset(name);

    int threads = 1;
#ifdef _OPENMP
#pragma omp parallel
    {
#pragma omp single
        threads = omp_get_num_threads();
    }
#endif
    std::printf("scenario %s, grid %d x %d, %d thread(s)\n", s.name.c_str(),
                s.t_axis.count, s.x_axis.count, threads);

    double t_serial = 0.0, t_parallel = 0.0;
    {
        const auto t0 = clock_type::now();
        const auto res = bkm::run_scenario(s, /*parallel=*/false);
        t_serial = seconds_since(t0);
        std::printf("serial   : %8.3f s   (conservation max %.3e)\n", t_serial,
                    res.reports.front().max_abs);
    }
    {
        const auto t0 = clock_type::now();
        const auto res = bkm::run_scenario(s, /*parallel=*/true);
        t_parallel = seconds_since(t0);
        std::printf("parallel : %8.3f s   (conservation max %.3e)\n", t_parallel,
                    res.reports.front().max_abs);
    }
    std::printf("speedup  : %8.2fx\n", t_serial / t_parallel);
    return 0;
}
