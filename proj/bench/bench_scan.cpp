// Timing comparison between the serial reference scan and the OpenMP scan,
// plus a Green-evaluation microbenchmark.

#include <chrono>
#include <cstdio>

#include "faddeev/singularities.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace faddeev;
using clk = std::chrono::steady_clock;

namespace {

double secs(clk::time_point t0) { return std::chrono::duration<double>(clk::now() - t0).count(); }

}  // namespace

int main(int argc, char** argv) {
    int n_r = 60, n_theta = 96;
    if (argc > 2) {
        n_r = std::atoi(argv[1]);
        n_theta = std::atoi(argv[2]);
    }
    auto [cfg, grid0] = figure_preset(1);
    GridSpec grid;
    grid.r_min = 0.2;
    grid.r_max = 5.0;
    grid.n_r = n_r;
    grid.n_theta = n_theta;
    const size_t cells = static_cast<size_t>(n_r) * static_cast<size_t>(n_theta);

    // warm-up + microbenchmark of a single det A evaluation
    const ComplexMomentum k = lambda_to_k(LambdaCoord({1.7, 0.4}), Energy(cfg.energy));
    auto t0 = clk::now();
    const int reps = 200;
    for (int i = 0; i < reps; ++i) (void)det_A(cfg, k);
    const double per_eval = secs(t0) / reps * 1e6;
    std::printf("det A evaluation: %.1f us\n", per_eval);

    t0 = clk::now();
    const ScanGrid serial = scan_det_grid_serial(cfg, grid);
    const double t_serial = secs(t0);

    t0 = clk::now();
    const ScanGrid parallel = scan_det_grid(cfg, grid);
    const double t_parallel = secs(t0);

    double max_dev = 0.0;
    for (size_t i = 0; i < serial.values.size(); ++i)
        max_dev = std::max(max_dev, std::abs(serial.values[i] - parallel.values[i]));

    int threads = 1;
#ifdef _OPENMP
#pragma omp parallel
    {
#pragma omp single
        threads = omp_get_num_threads();
    }
#endif
    std::printf("grid %dx%d (%zu cells)\n", n_r, n_theta, cells);
    std::printf("serial:   %.3fs  (%.0f cells/s)\n", t_serial, cells / t_serial);
    std::printf("parallel: %.3fs  (%.0f cells/s, %d threads)\n", t_parallel,
                cells / t_parallel, threads);
    std::printf("speedup:  %.2fx   max |serial - parallel| = %.1e\n", t_serial / t_parallel,
                max_dev);
    return max_dev == 0.0 ? 0 : 1;
}
