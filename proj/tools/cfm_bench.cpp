// Compares the serial reference kernels against the OpenMP variants: per-step
// region solves and the grid Laplacian, plus a whole-step timing.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cfm/cfsolve.hpp"
#include "cfm/harness.hpp"
#include "cfm/march.hpp"
#include "cfm/stencil.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 120;
    int steps = argc > 2 ? std::atoi(argv[2]) : 8;
#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
#else
    const int max_threads = 1;
#endif

    cfm::ProblemSpec problem = cfm::problem_circle();
    cfm::Grid grid(problem.dim, problem.lower, problem.upper, n);
    cfm::SideMap sidemap = cfm::classify_nodes(grid, *problem.curve);
    cfm::Tiling tiling = cfm::build_tiling(sidemap, *problem.curve, grid, 4.0);
    const double dt = grid.dx;
    cfm::Assembler assembler(grid.dim, tiling.side, dt, problem.c);

    std::printf("circle n=%d: %zu affected nodes, %zu regions, %d threads max\n", n,
                sidemap.affected.size(), tiling.regions.size(), max_threads);

    // Region solves: embarrassingly parallel map over independent 64x64 systems.
    auto t0 = Clock::now();
    auto serial = cfm::solve_regions_serial(tiling, problem, assembler, 0.0);
    double t_serial = ms_since(t0);

    t0 = Clock::now();
    auto parallel = cfm::solve_regions(tiling, problem, assembler, 0.0, max_threads);
    double t_parallel = ms_since(t0);

    double max_diff = 0.0;
    for (std::size_t k = 0; k < serial.size(); ++k)
        for (std::size_t i = 0; i < serial[k].weights().size(); ++i)
            max_diff = std::max(max_diff,
                                std::abs(serial[k].weights()[i] - parallel[k].weights()[i]));
    std::printf("region solves : serial %8.2f ms | omp %8.2f ms | speedup %.2fx | max|diff| %g\n",
                t_serial, t_parallel, t_serial / t_parallel, max_diff);

    // Laplacian kernel.
    std::vector<double> u(grid.node_count()), lap_s(grid.node_count()), lap_p(grid.node_count());
    for (int i = 0; i < grid.node_count(); ++i) u[i] = std::sin(7.0 * i);
    const int reps = 200;
    t0 = Clock::now();
    for (int r = 0; r < reps; ++r) cfm::laplacian_field_serial(u, grid, lap_s);
    double l_serial = ms_since(t0) / reps;
    t0 = Clock::now();
    for (int r = 0; r < reps; ++r) cfm::laplacian_field_parallel(u, grid, lap_p, max_threads);
    double l_parallel = ms_since(t0) / reps;
    double lap_diff = 0.0;
    for (int i = 0; i < grid.node_count(); ++i)
        lap_diff = std::max(lap_diff, std::abs(lap_s[i] - lap_p[i]));
    std::printf("laplacian     : serial %8.3f ms | omp %8.3f ms | speedup %.2fx | max|diff| %g\n",
                l_serial, l_parallel, l_serial / l_parallel, lap_diff);

    // Full steps.
    for (int threads : {1, max_threads}) {
        cfm::MarchOptions opts;
        opts.threads = threads;
        cfm::Marcher marcher(problem, grid, opts);
        t0 = Clock::now();
        for (int s = 0; s < steps; ++s) marcher.step(dt);
        std::printf("full rk4 step : %d thread(s) %8.2f ms/step\n", threads,
                    ms_since(t0) / steps);
    }
    return 0;
}
