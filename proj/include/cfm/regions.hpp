#pragma once

#include <string>
#include <vector>

#include "cfm/grid.hpp"
#include "cfm/interp.hpp"

namespace cfm {

/// Precomputed interface quadrature point inside a region: position, local
/// normal, and combined weight (Gauss weight x parameter span x arc speed;
/// exactly 1 for 1D point interfaces).
struct GammaPoint {
    Vec2 pos;
    Vec2 normal;
    double weight;
};

/// Space part of one node-centered correction region. The time slab is
/// supplied per step; the spatial geometry is static and reused.
struct Region {
    int owner = -1;  // grid index of the affected node
    Vec2 p0;         // interface point closest to the owner
    Frame frame;     // interface frame at p0 (one-sided at corners)
    RegionBox box;   // square with diagonals along the frame (interval in 1D)
    std::vector<CurveSegment> segments;
    std::vector<GammaPoint> gamma;

    /// Affine map of this region's box over the time slab [t0, t0+dt].
    BoxMap map(double t0, double dt) const;
};

struct Tiling {
    double side = 0.0;       // shared region side length L
    double l_factor = 0.0;   // L in units of sqrt(dx^2+dy^2) (0 in 1D)
    std::vector<Region> regions;  // parallel to SideMap::affected
};

/// Builds the region of one affected node. Throws CoverageFailure when an
/// opposite-side tap falls outside the square.
Region build_region(const AffectedNode& an, const Interface& curve, const Grid& grid,
                    double l_factor);

/// One region per affected node, shared L. Starts at l_factor and retries with
/// larger values (up to 5) when coverage fails anywhere.
Tiling build_tiling(const SideMap& sidemap, const Interface& curve, const Grid& grid,
                    double l_factor, int threads = 0);

/// Debug dump: JSON list of {node, p0, frame, L, vertices}.
void dump_tiling_json(const Tiling& tiling, const std::string& path);

}  // namespace cfm
