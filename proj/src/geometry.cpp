#include "cfm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cfm {

namespace {

constexpr double kGolden = 0.61803398874989484820;

double wrap_into(double theta, double lo, double hi) {
    const double range = hi - lo;
    double t = std::fmod(theta - lo, range);
    if (t < 0.0) t += range;
    return lo + t;
}

double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

// Minimize |p - pos(theta)|^2 by golden section on [a, b].
double golden_refine(const Interface& curve, const Vec2& p, double a, double b, int iters) {
    auto f = [&](double th) {
        Vec2 d = curve.position(th) - p;
        return d.dot(d);
    };
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < iters; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

Vec2 Interface::derivative(double theta) const {
    const double h = 1e-6 * std::max(1.0, theta_max() - theta_min());
    double lo = theta - h, hi = theta + h;
    if (!closed()) {
        lo = std::max(lo, theta_min());
        hi = std::min(hi, theta_max());
    }
    return (position(hi) - position(lo)) / (hi - lo);
}

ClosestPoint Interface::closest_point(const Vec2& p) const {
    const int n = 2048;
    const double lo = theta_min(), hi = theta_max();
    const double h = (hi - lo) / n;
    const int count = closed() ? n : n + 1;

    std::vector<double> dist(count);
    double dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) {
        Vec2 d = position(lo + i * h) - p;
        dist[i] = d.dot(d);
        dmin = std::min(dmin, dist[i]);
    }
    // Refine every local minimum close enough to the global sampled minimum; the
    // coarse grid can misrank competing lobes by up to one sample spacing.
    double speed = 0.0;
    for (int i = 0; i + 1 < count; ++i)
        speed = std::max(speed, (position(lo + (i + 1) * h) - position(lo + i * h)).norm());
    const double margin = (2.0 * speed + 1e-12) * (2.0 * std::sqrt(dmin) + 2.0 * speed);

    const double tie_tol = 1e-10 * std::max(1.0, length_scale());
    double best_theta = lo;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) {
        double prev = dist[(i + count - 1) % count];
        double next = dist[(i + 1) % count];
        if (!closed() && (i == 0 || i == count - 1)) {
            if (i == 0) prev = dist[0] + 1.0;
            if (i == count - 1) next = dist[count - 1] + 1.0;
        }
        if (dist[i] > prev || dist[i] > next) continue;
        if (dist[i] > dmin + margin) continue;
        double a = lo + (i - 1) * h, b = lo + (i + 1) * h;
        if (!closed()) {
            a = std::max(a, lo);
            b = std::min(b, hi);
        }
        double th = golden_refine(*this, p, a, b, 40);
        th = closed() ? wrap_into(th, lo, hi) : std::clamp(th, lo, hi);
        double d = (position(th) - p).norm();
        if (d < best_d - tie_tol || (d <= best_d + tie_tol && th < best_theta)) {
            best_d = d;
            best_theta = th;
        }
    }
    return {best_theta, position(best_theta)};
}

Frame Interface::frame_at(double theta) const {
    const double range = theta_max() - theta_min();
    const double tol = 1e-12 * std::max(1.0, range);
    for (double c : corner_params()) {
        double d = std::abs(theta - c);
        if (closed()) d = std::min(d, range - d);
        if (d <= tol) throw CornerPoint(theta);
    }
    Vec2 t = derivative(theta).normalized();
    return {t.perp_cw(), t};
}

Frame Interface::one_sided_frame(double theta) const {
    try {
        return frame_at(theta);
    } catch (const CornerPoint&) {
        const double eps = 1e-9 * (theta_max() - theta_min());
        double th = theta - eps;
        if (closed()) th = wrap_into(th, theta_min(), theta_max());
        return frame_at(th);
    }
}

int side_of(const Interface& curve, const Vec2& p) { return curve.side(p); }

std::vector<CurveSegment> clip_to_region(const Interface& curve, const RegionBox& box) {
    std::vector<CurveSegment> out;
    const double lo = curve.theta_min(), hi = curve.theta_max();
    const double range = hi - lo;

    // Point interfaces: clipping degenerates to membership of each point.
    if (curve.dim() == 1) {
        for (double th = lo; th < hi - 0.5; th += 1.0) {
            if (box.contains(curve.position(th), 1e-12)) out.push_back({th, th, 0.0});
        }
        return out;
    }

    auto inside = [&](double th) { return box.contains(curve.position(th)); };
    auto refine = [&](double a, double b) {
        // a and b straddle the boundary; unwrapped parameters are fine here.
        bool sa = inside(a);
        for (int it = 0; it < 60; ++it) {
            double m = 0.5 * (a + b);
            if (inside(m) == sa)
                a = m;
            else
                b = m;
        }
        return 0.5 * (a + b);
    };

    const int n = 8192;
    const double h = range / n;
    std::vector<char> in(n);
    int n_in = 0;
    for (int i = 0; i < n; ++i) {
        in[i] = inside(lo + i * h) ? 1 : 0;
        n_in += in[i];
    }

    if (n_in == 0) return out;
    if (n_in == n) {
        out.push_back({lo, hi, 0.0});
    } else {
        // Walk once around starting from an outside sample so segments never split
        // artificially at the parameter seam.
        int i0 = 0;
        while (in[i0]) ++i0;
        double open_at = 0.0;
        bool open = false;
        for (int j = 0; j <= n; ++j) {
            int i = (i0 + j) % n;
            int inext = (i0 + j + 1) % n;
            if (j == n) break;
            double ta = lo + (i0 + j) * h;
            double tb = ta + h;
            if (!in[i] && in[inext]) {
                open_at = refine(ta, tb);
                open = true;
            } else if (in[i] && !in[inext] && open) {
                double end = refine(ta, tb);
                out.push_back({open_at, end, 0.0});
                open = false;
            }
        }
        // Shift each segment so it starts within [lo, hi); the end may exceed hi for
        // segments spanning the seam.
        for (auto& s : out) {
            while (s.theta_a >= hi) {
                s.theta_a -= range;
                s.theta_b -= range;
            }
        }
        std::sort(out.begin(), out.end(),
                  [](const CurveSegment& a, const CurveSegment& b) { return a.theta_a < b.theta_a; });
        // Merge segments separated by a negligible parameter gap, drop slivers.
        std::vector<CurveSegment> merged;
        const double gap_tol = 1e-10 * range;
        for (const auto& s : out) {
            if (!merged.empty() && s.theta_a - merged.back().theta_b < gap_tol)
                merged.back().theta_b = s.theta_b;
            else
                merged.push_back(s);
        }
        out.clear();
        for (const auto& s : merged)
            if (s.theta_b - s.theta_a > gap_tol) out.push_back(s);
    }

    // Split at corner parameters so quadrature never straddles a frame discontinuity.
    std::vector<double> corners = curve.corner_params();
    if (!corners.empty()) {
        std::vector<double> cs;
        for (double c : corners) {
            cs.push_back(c);
            cs.push_back(c + range);
        }
        std::sort(cs.begin(), cs.end());
        std::vector<CurveSegment> split;
        for (auto seg : out) {
            for (double c : cs) {
                if (c > seg.theta_a + 1e-12 * range && c < seg.theta_b - 1e-12 * range) {
                    split.push_back({seg.theta_a, c, 0.0});
                    seg.theta_a = c;
                }
            }
            split.push_back(seg);
        }
        out = std::move(split);
    }

    // 6-point Gauss per panel is plenty for the smooth speeds involved.
    static const double gx[6] = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                                 0.2386191860831969,  0.6612093864662645,  0.9324695142031521};
    static const double gw[6] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                                 0.4679139345726910, 0.3607615730481386, 0.1713244923791704};
    for (auto& s : out) {
        double len = 0.0;
        const int panels = 8;
        double pw = (s.theta_b - s.theta_a) / panels;
        for (int p = 0; p < panels; ++p) {
            double a = s.theta_a + p * pw;
            for (int q = 0; q < 6; ++q) {
                double th = a + 0.5 * pw * (gx[q] + 1.0);
                len += 0.5 * pw * gw[q] * curve.derivative(wrap_into(th, lo, hi)).norm();
            }
        }
        s.arc_length = len;
    }
    return out;
}

// ---------------------------------------------------------------------------
// PointSet1D

PointSet1D::PointSet1D(std::vector<double> points) : points_(std::move(points)) {
    std::sort(points_.begin(), points_.end());
    double span = points_.empty() ? 1.0 : std::abs(points_.back()) + 1.0;
    scale_ = std::max(1.0, span);
}

int PointSet1D::point_index(double theta) const {
    int k = static_cast<int>(std::floor(theta + 0.5));
    if (k < 0 || k >= static_cast<int>(points_.size()))
        throw CfmError("1D interface parameter out of range");
    return k;
}

Vec2 PointSet1D::position(double theta) const { return {points_[point_index(theta)], 0.0}; }

int PointSet1D::side(const Vec2& p) const {
    const double tol = 1e-12 * scale_;
    int below = 0;
    for (double xk : points_) {
        if (std::abs(p.x - xk) <= tol) return 0;
        if (xk < p.x) ++below;
    }
    return (below % 2 == 1) ? +1 : -1;
}

ClosestPoint PointSet1D::closest_point(const Vec2& p) const {
    if (points_.empty()) throw CfmError("closest_point on empty 1D interface");
    int best = 0;
    double bd = std::abs(p.x - points_[0]);
    for (std::size_t k = 1; k < points_.size(); ++k) {
        double d = std::abs(p.x - points_[k]);
        if (d < bd - 1e-15 * scale_) {  // ties keep the smaller index
            bd = d;
            best = static_cast<int>(k);
        }
    }
    return {static_cast<double>(best), {points_[best], 0.0}};
}

Frame PointSet1D::frame_at(double theta) const {
    int k = point_index(theta);
    double nx = (k % 2 == 0) ? 1.0 : -1.0;  // sides alternate across successive points
    return {{nx, 0.0}, {0.0, 1.0}};
}

// ---------------------------------------------------------------------------
// Circle

int Circle::side(const Vec2& p) const {
    double d = (p - center_).norm() - radius_;
    const double tol = 1e-12 * std::max(1.0, radius_);
    if (std::abs(d) <= tol) return 0;
    return d > 0.0 ? +1 : -1;
}

ClosestPoint Circle::closest_point(const Vec2& p) const {
    Vec2 v = p - center_;
    if (v.norm() < 1e-14 * radius_) {
        // Center is equidistant to everything; the tie-break picks theta = 0.
        return {0.0, position(0.0)};
    }
    double th = std::atan2(v.y, v.x);
    if (th < 0.0) th += 2.0 * M_PI;
    return {th, center_ + v.normalized() * radius_};
}

// ---------------------------------------------------------------------------
// ParametricStar

Vec2 ParametricStar::position(double theta) const {
    double r = radius(theta);
    return center_ + Vec2{r * std::cos(theta), r * std::sin(theta)};
}

Vec2 ParametricStar::derivative(double theta) const {
    double r = radius(theta);
    double rp = r1_ * lobes_ * std::cos(lobes_ * theta);
    return {rp * std::cos(theta) - r * std::sin(theta), rp * std::sin(theta) + r * std::cos(theta)};
}

int ParametricStar::side(const Vec2& p) const {
    Vec2 v = p - center_;
    double rho = v.norm();
    double phi = std::atan2(v.y, v.x);
    double d = rho - radius(phi);
    const double tol = 1e-12 * std::max(1.0, r0_);
    if (std::abs(d) <= tol) return 0;
    return d > 0.0 ? +1 : -1;
}

// ---------------------------------------------------------------------------
// OsculatingCircles

OsculatingCircles::OsculatingCircles(std::array<Vec2, 3> centers, double radius)
    : arc_centers_(centers), radius_(radius), tri_(centers) {
    // Arc k runs on circle k from its tangency with circle k-1 to the one with
    // circle k+1, along the short sweep; consecutive arcs share tangency points.
    for (int k = 0; k < 3; ++k) {
        int prev = (k + 2) % 3, next = (k + 1) % 3;
        Vec2 up = (arc_centers_[prev] - arc_centers_[k]) * 0.5;
        Vec2 un = (arc_centers_[next] - arc_centers_[k]) * 0.5;
        double a0 = std::atan2(up.y, up.x);
        double a1 = std::atan2(un.y, un.x);
        double sweep = a1 - a0;
        while (sweep > M_PI) sweep -= 2.0 * M_PI;
        while (sweep < -M_PI) sweep += 2.0 * M_PI;
        arcs_[k] = {arc_centers_[k], a0, a0 + sweep};
    }
}

std::array<Vec2, 3> OsculatingCircles::tangency_points() const {
    std::array<Vec2, 3> t;
    for (int k = 0; k < 3; ++k) t[k] = (arc_centers_[k] + arc_centers_[(k + 2) % 3]) * 0.5;
    return t;  // t[k] joins arcs k-1 and k, i.e. corner parameter theta = k
}

int OsculatingCircles::arc_index(double theta) const {
    int k = static_cast<int>(std::floor(theta));
    return ((k % 3) + 3) % 3;
}

double OsculatingCircles::arc_angle(int k, double s) const {
    return arcs_[k].ang_start + s * (arcs_[k].ang_end - arcs_[k].ang_start);
}

Vec2 OsculatingCircles::position(double theta) const {
    double t = wrap_into(theta, 0.0, 3.0);
    int k = arc_index(t);
    double a = arc_angle(k, t - k);
    return arcs_[k].center + Vec2{radius_ * std::cos(a), radius_ * std::sin(a)};
}

Vec2 OsculatingCircles::derivative(double theta) const {
    double t = wrap_into(theta, 0.0, 3.0);
    int k = arc_index(t);
    double sweep = arcs_[k].ang_end - arcs_[k].ang_start;
    double a = arc_angle(k, t - k);
    return Vec2{-std::sin(a), std::cos(a)} * (radius_ * sweep);
}

Frame OsculatingCircles::frame_on_arc(int k, double s) const {
    double a = arc_angle(k, s);
    double sweep = arcs_[k].ang_end - arcs_[k].ang_start;
    Vec2 t = Vec2{-std::sin(a), std::cos(a)} * (sweep > 0 ? 1.0 : -1.0);
    return {t.perp_cw(), t};
}

Frame OsculatingCircles::frame_at(double theta) const {
    double t = wrap_into(theta, 0.0, 3.0);
    const double tol = 1e-12 * 3.0;
    double d = std::abs(t - std::round(t));
    if (d <= tol || std::abs(3.0 - t) <= tol) throw CornerPoint(theta);
    int k = arc_index(t);
    return frame_on_arc(k, t - k);
}

Frame OsculatingCircles::one_sided_frame(double theta) const {
    double t = wrap_into(theta, 0.0, 3.0);
    double d = std::abs(t - std::round(t));
    if (d > 1e-12 * 3.0 && std::abs(3.0 - t) > 1e-12 * 3.0) return frame_at(theta);
    int corner = static_cast<int>(std::round(t)) % 3;
    int k = (corner + 2) % 3;  // smaller-theta side: the arc ending at this corner
    return frame_on_arc(k, 1.0);
}

int OsculatingCircles::side(const Vec2& p) const {
    const double tol = 1e-12 * std::max(1.0, radius_);

    // On-curve test against the actual arc portions.
    for (int k = 0; k < 3; ++k) {
        Vec2 v = p - arcs_[k].center;
        double rho = v.norm();
        if (std::abs(rho - radius_) > tol) continue;
        double phi = std::atan2(v.y, v.x);
        double sweep = arcs_[k].ang_end - arcs_[k].ang_start;
        double s = (phi - arcs_[k].ang_start) / sweep;
        double speriod = 2.0 * M_PI / std::abs(sweep);
        s = std::fmod(s, speriod);
        if (s < 0.0) s += speriod;
        if (s <= 1.0 + tol) return 0;
    }

    bool in_circle = false;
    for (int k = 0; k < 3; ++k)
        if ((p - arc_centers_[k]).norm() < radius_ - tol) in_circle = true;
    if (in_circle) return +1;

    double s0 = cross(tri_[1] - tri_[0], p - tri_[0]);
    double s1 = cross(tri_[2] - tri_[1], p - tri_[1]);
    double s2 = cross(tri_[0] - tri_[2], p - tri_[2]);
    bool has_pos = s0 > 0 || s1 > 0 || s2 > 0;
    bool has_neg = s0 < 0 || s1 < 0 || s2 < 0;
    bool in_triangle = !(has_pos && has_neg);
    return in_triangle ? -1 : +1;
}

ClosestPoint OsculatingCircles::closest_point(const Vec2& p) const {
    const double tie_tol = 1e-9 * std::max(1.0, radius_);
    double best_d = std::numeric_limits<double>::infinity();
    double best_theta = 0.0;
    Vec2 best_point;

    for (int k = 0; k < 3; ++k) {
        Vec2 v = p - arcs_[k].center;
        double sweep = arcs_[k].ang_end - arcs_[k].ang_start;
        std::vector<double> svals = {0.0, 1.0};
        if (v.norm() > 1e-14 * radius_) {
            double phi = std::atan2(v.y, v.x);
            double s = (phi - arcs_[k].ang_start) / sweep;
            double speriod = 2.0 * M_PI / std::abs(sweep);
            s = std::fmod(s, speriod);
            if (s < 0.0) s += speriod;
            if (s <= 1.0) svals.push_back(s);
        }
        for (double s : svals) {
            double theta = k + s;
            if (theta >= 3.0) theta -= 3.0;
            Vec2 q = position(theta);
            double d = (p - q).norm();
            if (d < best_d - tie_tol || (d <= best_d + tie_tol && theta < best_theta)) {
                best_d = d;
                best_theta = theta;
                best_point = q;
            }
        }
    }
    return {best_theta, best_point};
}

}  // namespace cfm
