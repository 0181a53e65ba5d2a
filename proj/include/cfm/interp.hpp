#pragma once

#include <vector>

#include "cfm/geometry.hpp"

namespace cfm {

namespace hermite {

/// Value of the m-th derivative of the cubic Hermite shape function on [0,1]
/// attached to corner c (0 or 1) and derivative flag f (0 = value DOF, 1 =
/// slope DOF). Orders above 3 are identically zero.
double shape(int f, int c, int m, double s);

}  // namespace hermite

/// Affine map between a region's rotated space-time box and the local unit cube.
/// Spatial axes e1/e2 are orthonormal; the box has side ls and time extent dt.
struct BoxMap {
    int sdim = 2;
    Vec2 origin;  // global position of local (0,0)
    Vec2 e1{1.0, 0.0};
    Vec2 e2{0.0, 1.0};
    double ls = 1.0;
    double t0 = 0.0;
    double dt = 1.0;

    Vec2 map_space(double xi, double eta) const {
        if (sdim == 1) return {origin.x + ls * xi, 0.0};
        return origin + e1 * (ls * xi) + e2 * (ls * eta);
    }
    double map_time(double tau) const { return t0 + dt * tau; }
    void to_local(const Vec2& p, double t, double& xi, double& eta, double& tau) const {
        Vec2 d = p - origin;
        if (sdim == 1) {
            xi = d.x / ls;
            eta = 0.0;
        } else {
            xi = d.dot(e1) / ls;
            eta = d.dot(e2) / ls;
        }
        tau = (t - t0) / dt;
    }
};

/// Descriptor of one DOF: corner indices and derivative flags per local axis.
struct DofInfo {
    int cx, cy, ct;
    int fx, fy, ft;
};

/// Number of DOFs of the tensor Hermite basis: 16 in 1D(x,t), 64 in 2D(x,y,t).
int dof_count(int sdim);

/// Layout: corners in lexicographic order (cx, cy, ct), and per corner the
/// flags (value, dx, dy, dt, dxy, dxt, dyt, dxyt); 1D drops the y axis.
/// Derivative DOFs are with respect to the local unit-cube coordinates.
DofInfo dof_info(int sdim, int dof);

/// Fills row[dof] with the (ax, ay, at)-th local derivative of every basis
/// function at local point (xi, eta, tau).
void basis_row(int sdim, int ax, int ay, int at, double xi, double eta, double tau, double* row);

/// Tensor-product cubic Hermite interpolant of the correction function on one
/// region box. Immutable after construction; evaluation is pure.
class SpaceTimeInterpolant {
  public:
    SpaceTimeInterpolant() = default;
    SpaceTimeInterpolant(BoxMap box, std::vector<double> weights);

    /// Value at a global space-time point. Throws OutOfBox beyond the margin.
    double eval(const Vec2& x, double t) const { return partial(0, 0, 0, x, t); }

    /// Mixed partial d^mx_x d^my_y d^mt_t in global coordinates (each <= 3).
    double partial(int mx, int my, int mt, const Vec2& x, double t) const;

    const BoxMap& box() const { return box_; }
    const std::vector<double>& weights() const { return w_; }

  private:
    double local_partial(int ax, int ay, int at, double xi, double eta, double tau) const;

    BoxMap box_;
    std::vector<double> w_;
};

}  // namespace cfm
