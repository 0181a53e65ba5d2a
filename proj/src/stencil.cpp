#include "cfm/stencil.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cfm/errors.hpp"

namespace cfm {

namespace {

inline double row_second_derivative(const double* u, int i, int n, double inv12dx2) {
    const int im2 = i >= 2 ? i - 2 : i - 2 + n;
    const int im1 = i >= 1 ? i - 1 : i - 1 + n;
    const int ip1 = i + 1 < n ? i + 1 : i + 1 - n;
    const int ip2 = i + 2 < n ? i + 2 : i + 2 - n;
    return (-u[im2] + 16.0 * u[im1] - 30.0 * u[i] + 16.0 * u[ip1] - u[ip2]) * inv12dx2;
}

}  // namespace

double laplacian_at(std::span<const double> u, int node, const Grid& grid) {
    const double inv = 1.0 / (12.0 * grid.dx * grid.dx);
    if (grid.dim == 1) return row_second_derivative(u.data(), node, grid.n, inv);

    const int n = grid.n;
    const int i = grid.ix(node), j = grid.iy(node);
    const double* row = u.data() + j * n;
    double val = row_second_derivative(row, i, n, inv);
    // y-direction: strided taps
    const int jm2 = grid.wrap(j - 2), jm1 = grid.wrap(j - 1);
    const int jp1 = grid.wrap(j + 1), jp2 = grid.wrap(j + 2);
    val += (-u[i + jm2 * n] + 16.0 * u[i + jm1 * n] - 30.0 * u[node] + 16.0 * u[i + jp1 * n] -
            u[i + jp2 * n]) *
           inv;
    return val;
}

void laplacian_field_serial(std::span<const double> u, const Grid& grid, std::span<double> out) {
    const double inv = 1.0 / (12.0 * grid.dx * grid.dx);
    const int n = grid.n;
    if (grid.dim == 1) {
        for (int i = 0; i < n; ++i) out[i] = row_second_derivative(u.data(), i, n, inv);
        return;
    }
    for (int j = 0; j < n; ++j) {
        const double* row = u.data() + j * n;
        double* orow = out.data() + j * n;
        const double* rm2 = u.data() + grid.wrap(j - 2) * n;
        const double* rm1 = u.data() + grid.wrap(j - 1) * n;
        const double* rp1 = u.data() + grid.wrap(j + 1) * n;
        const double* rp2 = u.data() + grid.wrap(j + 2) * n;
        for (int i = 0; i < n; ++i) {
            double val = row_second_derivative(row, i, n, inv);
            val += (-rm2[i] + 16.0 * rm1[i] - 30.0 * row[i] + 16.0 * rp1[i] - rp2[i]) * inv;
            orow[i] = val;
        }
    }
}

void laplacian_field_parallel(std::span<const double> u, const Grid& grid, std::span<double> out,
                              int threads) {
    const double inv = 1.0 / (12.0 * grid.dx * grid.dx);
    const int n = grid.n;
    if (grid.dim == 1) {
#pragma omp parallel for schedule(static) num_threads(threads)
        for (int i = 0; i < n; ++i) out[i] = row_second_derivative(u.data(), i, n, inv);
        return;
    }
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int j = 0; j < n; ++j) {
        const double* row = u.data() + j * n;
        double* orow = out.data() + j * n;
        const double* rm2 = u.data() + grid.wrap(j - 2) * n;
        const double* rm1 = u.data() + grid.wrap(j - 1) * n;
        const double* rp1 = u.data() + grid.wrap(j + 1) * n;
        const double* rp2 = u.data() + grid.wrap(j + 2) * n;
        for (int i = 0; i < n; ++i) {
            double val = row_second_derivative(row, i, n, inv);
            val += (-rm2[i] + 16.0 * rm1[i] - 30.0 * row[i] + 16.0 * rp1[i] - rp2[i]) * inv;
            orow[i] = val;
        }
    }
}

void laplacian_field(std::span<const double> u, const Grid& grid, std::span<double> out,
                     int threads) {
#ifdef _OPENMP
    if (threads != 1) {
        if (threads <= 0) threads = omp_get_max_threads();
        laplacian_field_parallel(u, grid, out, threads);
        return;
    }
#endif
    laplacian_field_serial(u, grid, out);
}

double correction_source(const AffectedNode& an, int node_side,
                         std::span<const double> tap_corrections) {
    double s = 0.0;
    for (std::size_t k = 0; k < an.taps.size(); ++k)
        s += an.taps[k].coef * node_side * tap_corrections[k];
    return s;
}

double corrected_laplacian_at(std::span<const double> u, const AffectedNode& an, int node_side,
                              const Grid& grid, const std::map<int, double>& corrections) {
    double val = laplacian_at(u, an.node, grid);
    for (const TapRef& tap : an.taps) {
        auto it = corrections.find(tap.node);
        if (it == corrections.end())
            throw MissingCorrection(an.node, "no correction for tap " + std::to_string(tap.node) +
                                                 " of node " + std::to_string(an.node));
        val += tap.coef * node_side * it->second;
    }
    return val;
}

double stencil_spectral_bound(int dim) { return dim * 16.0 / 3.0; }

}  // namespace cfm
