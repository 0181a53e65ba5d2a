#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfm/geometry.hpp"

namespace cfm {

/// Uniform periodic Cartesian grid over a square (or interval) domain.
/// Nodes sit at lower + i*dx, i = 0..n-1; index arithmetic wraps modulo n.
struct Grid {
    int dim = 1;
    double lower = 0.0;
    double upper = 1.0;
    int n = 0;
    double dx = 0.0;

    Grid() = default;
    Grid(int dim_, double lower_, double upper_, int n_);

    int node_count() const { return dim == 1 ? n : n * n; }
    int wrap(int i) const {
        i %= n;
        return i < 0 ? i + n : i;
    }
    int index(int i, int j = 0) const { return dim == 1 ? wrap(i) : wrap(i) + n * wrap(j); }
    int ix(int idx) const { return dim == 1 ? idx : idx % n; }
    int iy(int idx) const { return dim == 1 ? 0 : idx / n; }
    Vec2 node_pos(int idx) const {
        return {lower + ix(idx) * dx, dim == 1 ? 0.0 : lower + iy(idx) * dx};
    }
};

/// Grid fields at one time level: u and its time derivative v.
struct WaveState {
    std::vector<double> u;
    std::vector<double> v;
    double t = 0.0;
};

/// One opposite-side stencil tap of an affected node.
struct TapRef {
    int node;     // wrapped grid index of the tap
    Vec2 pos;     // unwrapped physical position relative to the owner
    double coef;  // stencil coefficient of this tap: (-1 or 16)/(12 dx^2)
};

struct AffectedNode {
    int node;
    std::vector<TapRef> taps;
};

/// Per-node side signs plus the list of interface-affected nodes.
struct SideMap {
    std::vector<std::int8_t> side;  // +1 or -1 (on-curve nodes fold into -1)
    std::vector<AffectedNode> affected;
};

/// Classifies every node against the curve and finds all nodes whose 5-point
/// stencil along any axis straddles it.
SideMap classify_nodes(const Grid& grid, const Interface& curve);

/// Writes <base>.csv with columns x[,y],u,v (x fastest) and <base>.meta.json.
void write_snapshot(const Grid& grid, const WaveState& state, const std::string& base,
                    const std::string& problem_id);

}  // namespace cfm
