#include "cfm/grid.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "cfm/errors.hpp"

namespace cfm {

Grid::Grid(int dim_, double lower_, double upper_, int n_)
    : dim(dim_), lower(lower_), upper(upper_), n(n_) {
    if (dim < 1 || dim > 2) throw ConfigError("grid dim must be 1 or 2");
    if (n < 8) throw ConfigError("grid needs at least 8 nodes per axis");
    if (upper <= lower) throw ConfigError("grid bounds reversed");
    dx = (upper - lower) / n;
}

SideMap classify_nodes(const Grid& grid, const Interface& curve) {
    const int total = grid.node_count();
    SideMap map;
    map.side.resize(total);
    for (int idx = 0; idx < total; ++idx) {
        int s = curve.side(grid.node_pos(idx));
        map.side[idx] = static_cast<std::int8_t>(s == 0 ? -1 : s);  // on-curve nodes join the minus side
    }

    const double c1 = 16.0 / (12.0 * grid.dx * grid.dx);
    const double c2 = -1.0 / (12.0 * grid.dx * grid.dx);
    const int offsets[4] = {-2, -1, 1, 2};

    for (int idx = 0; idx < total; ++idx) {
        const int i = grid.ix(idx), j = grid.iy(idx);
        const Vec2 p = grid.node_pos(idx);
        AffectedNode an{idx, {}};
        for (int axis = 0; axis < grid.dim; ++axis) {
            for (int o : offsets) {
                int tap = axis == 0 ? grid.index(i + o, j) : grid.index(i, j + o);
                if (map.side[tap] == map.side[idx]) continue;
                Vec2 tp = p;
                (axis == 0 ? tp.x : tp.y) += o * grid.dx;
                an.taps.push_back({tap, tp, std::abs(o) == 1 ? c1 : c2});
            }
        }
        if (!an.taps.empty()) map.affected.push_back(std::move(an));
    }
    return map;
}

void write_snapshot(const Grid& grid, const WaveState& state, const std::string& base,
                    const std::string& problem_id) {
    std::ofstream csv(base + ".csv");
    if (!csv) throw CfmError("cannot open snapshot file " + base + ".csv");
    char buf[128];
    if (grid.dim == 1) {
        csv << "x,u,v\n";
        for (int i = 0; i < grid.n; ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", grid.node_pos(i).x, state.u[i],
                          state.v[i]);
            csv << buf;
        }
    } else {
        csv << "x,y,u,v\n";
        for (int j = 0; j < grid.n; ++j) {
            for (int i = 0; i < grid.n; ++i) {
                int idx = grid.index(i, j);
                Vec2 p = grid.node_pos(idx);
                std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", p.x, p.y, state.u[idx],
                              state.v[idx]);
                csv << buf;
            }
        }
    }

    nlohmann::json meta;
    meta["problem"] = problem_id;
    meta["time"] = state.t;
    meta["grid"] = {{"dim", grid.dim}, {"n", grid.n},     {"lower", grid.lower},
                    {"upper", grid.upper}, {"dx", grid.dx}};
    std::ofstream js(base + ".meta.json");
    js << meta.dump(2) << "\n";
}

}  // namespace cfm
