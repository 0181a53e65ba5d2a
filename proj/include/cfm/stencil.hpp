#pragma once

#include <map>
#include <span>

#include "cfm/grid.hpp"

namespace cfm {

/// Coefficients of the five-point fourth-order second-derivative stencil,
/// offsets -2..2, to be divided by 12 dx^2.
inline constexpr double kStencil[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};

/// Five-point fourth-order Laplacian of u at one node, periodic wrap.
double laplacian_at(std::span<const double> u, int node, const Grid& grid);

/// Laplacian over the whole grid. The serial variant is the reference kept for
/// testing; laplacian_field dispatches to it for threads <= 1.
void laplacian_field_serial(std::span<const double> u, const Grid& grid, std::span<double> out);
void laplacian_field_parallel(std::span<const double> u, const Grid& grid, std::span<double> out,
                              int threads);
void laplacian_field(std::span<const double> u, const Grid& grid, std::span<double> out,
                     int threads);

/// Correction source at an affected node: sum of coef * sign * D over opposite
/// taps. Adding it to the plain Laplacian reconstructs the node's own branch.
double correction_source(const AffectedNode& an, int node_side,
                         std::span<const double> tap_corrections);

/// Five-point Laplacian with opposite-side taps shifted by the correction map.
/// Throws MissingCorrection when a needed tap has no entry.
double corrected_laplacian_at(std::span<const double> u, const AffectedNode& an, int node_side,
                              const Grid& grid, const std::map<int, double>& corrections);

/// Spectral magnitude bound of the stencil (in units of 1/dx^2): dim * 16/3.
double stencil_spectral_bound(int dim);

}  // namespace cfm
