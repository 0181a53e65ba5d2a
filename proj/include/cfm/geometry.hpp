#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "cfm/errors.hpp"

namespace cfm {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    Vec2 normalized() const {
        double n = norm();
        return {x / n, y / n};
    }
    /// Rotate by -90 degrees: the outward side of a CCW-traversed curve.
    Vec2 perp_cw() const { return {y, -x}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Orthonormal pair at a curve point; normal points from the minus side into the plus side.
struct Frame {
    Vec2 normal;
    Vec2 tangent;
};

struct ClosestPoint {
    double theta = 0.0;
    Vec2 point;
};

/// Portion of the curve parameter range lying inside one region box.
struct CurveSegment {
    double theta_a = 0.0;
    double theta_b = 0.0;
    double arc_length = 0.0;
};

/// Axis-free rotated square (2D) or interval (1D) used as the spatial part of a region.
/// e1/e2 are the unit side directions; the box spans +-side/2 along each from the center.
struct RegionBox {
    int sdim = 2;
    Vec2 center;
    Vec2 e1{1.0, 0.0};
    Vec2 e2{0.0, 1.0};
    double side = 0.0;

    bool contains(const Vec2& p, double tol = 0.0) const {
        Vec2 d = p - center;
        if (sdim == 1) return std::abs(d.x) <= 0.5 * side + tol;
        return std::abs(d.dot(e1)) <= 0.5 * side + tol && std::abs(d.dot(e2)) <= 0.5 * side + tol;
    }
    std::array<Vec2, 4> vertices() const {
        double h = 0.5 * side;
        return {center + h * e1 + h * e2, center - h * e1 + h * e2, center - h * e1 - h * e2,
                center + h * e1 - h * e2};
    }
};

/// Parametric interface with side classification. side() is +1 on the component holding
/// the u+ branch, -1 on the u- component, 0 on the curve itself (within tolerance).
class Interface {
  public:
    virtual ~Interface() = default;

    virtual int dim() const = 0;
    virtual double theta_min() const = 0;
    virtual double theta_max() const = 0;
    virtual bool closed() const = 0;

    virtual Vec2 position(double theta) const = 0;
    /// dp/dtheta. Default: central differences (analytic curves override).
    virtual Vec2 derivative(double theta) const;
    virtual int side(const Vec2& p) const = 0;

    /// Parameters where the curve is only C0 (frame_at throws CornerPoint there).
    virtual std::vector<double> corner_params() const { return {}; }

    /// Nearest curve point; ties are broken toward the smaller parameter.
    virtual ClosestPoint closest_point(const Vec2& p) const;

    /// Unit normal/tangent at theta. Throws CornerPoint at corner parameters.
    virtual Frame frame_at(double theta) const;

    /// Frame limit taken from below; used by region construction at corners.
    virtual Frame one_sided_frame(double theta) const;

    /// Curve length scale used for tolerances.
    virtual double length_scale() const { return 1.0; }
};

int side_of(const Interface& curve, const Vec2& p);

/// Gamma intersected with a region box: non-overlapping segments sorted by theta,
/// split at corner parameters. Empty when the box misses the curve.
std::vector<CurveSegment> clip_to_region(const Interface& curve, const RegionBox& box);

/// One or more interface points on a line; theta is the point index.
class PointSet1D : public Interface {
  public:
    explicit PointSet1D(std::vector<double> points);

    int dim() const override { return 1; }
    double theta_min() const override { return 0.0; }
    double theta_max() const override { return static_cast<double>(points_.size()); }
    bool closed() const override { return false; }
    Vec2 position(double theta) const override;
    Vec2 derivative(double) const override { return {0.0, 0.0}; }
    int side(const Vec2& p) const override;
    ClosestPoint closest_point(const Vec2& p) const override;
    Frame frame_at(double theta) const override;
    double length_scale() const override { return scale_; }
    std::size_t count() const { return points_.size(); }

  private:
    int point_index(double theta) const;
    std::vector<double> points_;  // ascending
    double scale_;
};

class Circle : public Interface {
  public:
    Circle(Vec2 center, double radius) : center_(center), radius_(radius) {}

    int dim() const override { return 2; }
    double theta_min() const override { return 0.0; }
    double theta_max() const override { return 2.0 * M_PI; }
    bool closed() const override { return true; }
    Vec2 position(double theta) const override {
        return center_ + Vec2{radius_ * std::cos(theta), radius_ * std::sin(theta)};
    }
    Vec2 derivative(double theta) const override {
        return {-radius_ * std::sin(theta), radius_ * std::cos(theta)};
    }
    int side(const Vec2& p) const override;
    ClosestPoint closest_point(const Vec2& p) const override;
    Frame frame_at(double theta) const override {
        Vec2 n{std::cos(theta), std::sin(theta)};
        return {n, {-n.y, n.x}};
    }
    double length_scale() const override { return radius_; }
    Vec2 center() const { return center_; }
    double radius() const { return radius_; }

  private:
    Vec2 center_;
    double radius_;
};

/// r(theta) = r0 + r1*sin(lobes*theta) around a center, CCW.
class ParametricStar : public Interface {
  public:
    ParametricStar(Vec2 center, double r0, double r1, int lobes)
        : center_(center), r0_(r0), r1_(r1), lobes_(lobes) {}

    int dim() const override { return 2; }
    double theta_min() const override { return 0.0; }
    double theta_max() const override { return 2.0 * M_PI; }
    bool closed() const override { return true; }
    Vec2 position(double theta) const override;
    Vec2 derivative(double theta) const override;
    int side(const Vec2& p) const override;
    double length_scale() const override { return r0_; }
    double radius(double theta) const { return r0_ + r1_ * std::sin(lobes_ * theta); }

  private:
    Vec2 center_;
    double r0_, r1_;
    int lobes_;
};

/// Boundary of the curvilinear triangle between three mutually tangent circles.
/// theta in [0,3): arc k = floor(theta) lies on circle k, swept between its two
/// tangency points; the tangency points are cusps (corner parameters 0,1,2).
class OsculatingCircles : public Interface {
  public:
    OsculatingCircles(std::array<Vec2, 3> centers, double radius);

    int dim() const override { return 2; }
    double theta_min() const override { return 0.0; }
    double theta_max() const override { return 3.0; }
    bool closed() const override { return true; }
    Vec2 position(double theta) const override;
    Vec2 derivative(double theta) const override;
    int side(const Vec2& p) const override;
    std::vector<double> corner_params() const override { return {0.0, 1.0, 2.0}; }
    ClosestPoint closest_point(const Vec2& p) const override;
    Frame frame_at(double theta) const override;
    Frame one_sided_frame(double theta) const override;
    double length_scale() const override { return radius_; }

    Vec2 arc_center(int k) const { return arc_centers_[k]; }
    std::array<Vec2, 3> tangency_points() const;

  private:
    struct Arc {
        Vec2 center;
        double ang_start;
        double ang_end;  // swept monotonically from ang_start to ang_end
    };
    int arc_index(double theta) const;
    double arc_angle(int k, double s) const;
    Frame frame_on_arc(int k, double s) const;

    std::array<Vec2, 3> arc_centers_;
    double radius_;
    std::array<Arc, 3> arcs_;
    std::array<Vec2, 3> tri_;  // triangle of circle centers, for the side test
};

/// Arbitrary parametric curve given by callables; closest points come from
/// coarse sampling plus golden-section refinement.
class GenericParametric : public Interface {
  public:
    GenericParametric(std::function<Vec2(double)> position, std::function<int(const Vec2&)> side,
                      double theta_min, double theta_max, bool closed, double scale = 1.0)
        : pos_(std::move(position)), side_(std::move(side)), tmin_(theta_min), tmax_(theta_max),
          closed_(closed), scale_(scale) {}

    int dim() const override { return 2; }
    double theta_min() const override { return tmin_; }
    double theta_max() const override { return tmax_; }
    bool closed() const override { return closed_; }
    Vec2 position(double theta) const override { return pos_(theta); }
    int side(const Vec2& p) const override { return side_(p); }
    double length_scale() const override { return scale_; }

  private:
    std::function<Vec2(double)> pos_;
    std::function<int(const Vec2&)> side_;
    double tmin_, tmax_;
    bool closed_;
    double scale_;
};

}  // namespace cfm
