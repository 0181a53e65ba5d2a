#include "cfm/regions.hpp"

#include <cmath>
#include <fstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <nlohmann/json.hpp>

#include "cfm/errors.hpp"

namespace cfm {

namespace {

const double kGaussX[6] = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                           0.2386191860831969,  0.6612093864662645,  0.9324695142031521};
const double kGaussW[6] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                           0.4679139345726910, 0.3607615730481386, 0.1713244923791704};

}  // namespace

BoxMap Region::map(double t0, double dt) const {
    BoxMap m;
    m.sdim = box.sdim;
    m.e1 = box.e1;
    m.e2 = box.e2;
    m.ls = box.side;
    if (box.sdim == 1)
        m.origin = {box.center.x - 0.5 * box.side, 0.0};
    else
        m.origin = box.center - box.e1 * (0.5 * box.side) - box.e2 * (0.5 * box.side);
    m.t0 = t0;
    m.dt = dt;
    return m;
}

Region build_region(const AffectedNode& an, const Interface& curve, const Grid& grid,
                    double l_factor) {
    if (l_factor < 3.0 || l_factor > 5.0)
        throw ConfigError("region L factor must lie in [3, 5]");

    Region r;
    r.owner = an.node;
    ClosestPoint cp = curve.closest_point(grid.node_pos(an.node));
    r.p0 = cp.point;
    r.frame = curve.one_sided_frame(cp.theta);

    if (grid.dim == 1) {
        r.box.sdim = 1;
        r.box.center = r.p0;
        r.box.side = 4.0 * grid.dx;  // two nodes on either side of the interface point
        r.box.e1 = {1.0, 0.0};
        r.box.e2 = {0.0, 1.0};
    } else {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        r.box.sdim = 2;
        r.box.center = r.p0;
        r.box.side = l_factor * std::sqrt(2.0) * grid.dx;
        // Sides at 45 degrees to the frame, so the diagonals align with n and t.
        r.box.e1 = (r.frame.normal + r.frame.tangent) * inv_sqrt2;
        r.box.e2 = (r.frame.tangent - r.frame.normal) * inv_sqrt2;
    }

    const double tol = 1e-9 * r.box.side;
    for (const TapRef& tap : an.taps) {
        if (!r.box.contains(tap.pos, tol))
            throw CoverageFailure(an.node, "region around node " + std::to_string(an.node) +
                                               " does not cover tap at offset; L too small");
    }

    r.segments = clip_to_region(curve, r.box);
    if (r.segments.empty())
        throw EmptyInterface("region of node " + std::to_string(an.node) +
                             " contains no interface piece");

    const double lo = curve.theta_min(), hi = curve.theta_max();
    for (const CurveSegment& seg : r.segments) {
        if (curve.dim() == 1) {
            r.gamma.push_back({curve.position(seg.theta_a),
                               curve.frame_at(seg.theta_a).normal, 1.0});
            continue;
        }
        const double span = seg.theta_b - seg.theta_a;
        for (int q = 0; q < 6; ++q) {
            double th = seg.theta_a + 0.5 * span * (kGaussX[q] + 1.0);
            double tw = th;
            if (tw >= hi) tw -= (hi - lo);  // wrap seam-spanning segments
            Frame f = curve.frame_at(tw);
            double speed = curve.derivative(tw).norm();
            r.gamma.push_back({curve.position(tw), f.normal, 0.5 * span * kGaussW[q] * speed});
        }
    }
    return r;
}

Tiling build_tiling(const SideMap& sidemap, const Interface& curve, const Grid& grid,
                    double l_factor, int threads) {
    Tiling tiling;
    const int count = static_cast<int>(sidemap.affected.size());
    tiling.regions.resize(count);
    if (grid.dim == 1) {
        tiling.side = 4.0 * grid.dx;
        tiling.l_factor = 0.0;
    }

#ifdef _OPENMP
    if (threads <= 0) threads = omp_get_max_threads();
#else
    threads = 1;
#endif

    for (double lf = l_factor;; lf = std::min(lf + 0.5, 5.0)) {
        std::vector<std::string> errors(count);
        // 0 = ok, 1 = coverage failure (retryable), 2 = fatal
        std::vector<char> failed(count, 0);
        bool coverage_failed = false;

#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
        for (int k = 0; k < count; ++k) {
            try {
                tiling.regions[k] = build_region(sidemap.affected[k], curve, grid, lf);
            } catch (const CoverageFailure& e) {
                failed[k] = 1;
                errors[k] = e.what();
            } catch (const std::exception& e) {
                failed[k] = 2;
                errors[k] = e.what();
            }
        }
        for (int k = 0; k < count; ++k) {
            if (failed[k] == 2) throw CfmError(errors[k]);
        }
        for (int k = 0; k < count; ++k) {
            if (!failed[k]) continue;
            coverage_failed = true;
            if (lf >= 5.0) throw CoverageFailure(sidemap.affected[k].node, errors[k]);
            break;
        }
        if (!coverage_failed) {
            if (grid.dim == 2) {
                tiling.side = lf * std::sqrt(2.0) * grid.dx;
                tiling.l_factor = lf;
            }
            return tiling;
        }
    }
}

void dump_tiling_json(const Tiling& tiling, const std::string& path) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Region& r : tiling.regions) {
        nlohmann::json jr;
        jr["node"] = r.owner;
        jr["p0"] = {r.p0.x, r.p0.y};
        jr["normal"] = {r.frame.normal.x, r.frame.normal.y};
        jr["tangent"] = {r.frame.tangent.x, r.frame.tangent.y};
        jr["L"] = r.box.side;
        nlohmann::json verts = nlohmann::json::array();
        for (const Vec2& v : r.box.vertices()) verts.push_back({v.x, v.y});
        jr["vertices"] = verts;
        arr.push_back(jr);
    }
    std::ofstream out(path);
    if (!out) throw CfmError("cannot open tiling dump " + path);
    out << arr.dump(2) << "\n";
}

}  // namespace cfm
