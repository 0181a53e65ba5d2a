#include "cfm/interp.hpp"

#include <cmath>

#include "cfm/errors.hpp"

namespace cfm {

namespace hermite {

double shape(int f, int c, int m, double s) {
    if (m > 3) return 0.0;
    if (f == 0 && c == 0) {  // 2s^3 - 3s^2 + 1
        switch (m) {
            case 0: return ((2.0 * s - 3.0) * s) * s + 1.0;
            case 1: return (6.0 * s - 6.0) * s;
            case 2: return 12.0 * s - 6.0;
            default: return 12.0;
        }
    }
    if (f == 0 && c == 1) {  // -2s^3 + 3s^2
        switch (m) {
            case 0: return ((-2.0 * s + 3.0) * s) * s;
            case 1: return (-6.0 * s + 6.0) * s;
            case 2: return -12.0 * s + 6.0;
            default: return -12.0;
        }
    }
    if (f == 1 && c == 0) {  // s^3 - 2s^2 + s
        switch (m) {
            case 0: return ((s - 2.0) * s + 1.0) * s;
            case 1: return (3.0 * s - 4.0) * s + 1.0;
            case 2: return 6.0 * s - 4.0;
            default: return 6.0;
        }
    }
    // f == 1, c == 1: s^3 - s^2
    switch (m) {
        case 0: return (s - 1.0) * s * s;
        case 1: return (3.0 * s - 2.0) * s;
        case 2: return 6.0 * s - 2.0;
        default: return 6.0;
    }
}

}  // namespace hermite

namespace {

// Flag tuples per corner, matching the documented layout.
constexpr int kFlags2D[8][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                                {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}};
constexpr int kFlags1D[4][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};

double binom(int n, int k) {
    static const double table[4][4] = {
        {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
    return table[n][k];
}

}  // namespace

int dof_count(int sdim) { return sdim == 1 ? 16 : 64; }

DofInfo dof_info(int sdim, int dof) {
    DofInfo d{};
    if (sdim == 1) {
        int corner = dof / 4, f = dof % 4;
        d.cx = corner / 2;
        d.ct = corner % 2;
        d.cy = 0;
        d.fx = kFlags1D[f][0];
        d.ft = kFlags1D[f][1];
        d.fy = 0;
    } else {
        int corner = dof / 8, f = dof % 8;
        d.cx = corner / 4;
        d.cy = (corner / 2) % 2;
        d.ct = corner % 2;
        d.fx = kFlags2D[f][0];
        d.fy = kFlags2D[f][1];
        d.ft = kFlags2D[f][2];
    }
    return d;
}

void basis_row(int sdim, int ax, int ay, int at, double xi, double eta, double tau, double* row) {
    using hermite::shape;
    double hx[2][2], hy[2][2], ht[2][2];
    for (int f = 0; f < 2; ++f)
        for (int c = 0; c < 2; ++c) {
            hx[f][c] = shape(f, c, ax, xi);
            hy[f][c] = sdim == 2 ? shape(f, c, ay, eta) : 1.0;
            ht[f][c] = shape(f, c, at, tau);
        }
    const int nd = dof_count(sdim);
    for (int k = 0; k < nd; ++k) {
        DofInfo d = dof_info(sdim, k);
        double v = hx[d.fx][d.cx] * ht[d.ft][d.ct];
        if (sdim == 2) v *= hy[d.fy][d.cy];
        row[k] = v;
    }
}

SpaceTimeInterpolant::SpaceTimeInterpolant(BoxMap box, std::vector<double> weights)
    : box_(box), w_(std::move(weights)) {
    if (static_cast<int>(w_.size()) != dof_count(box_.sdim))
        throw CfmError("interpolant weight count does not match the basis");
}

double SpaceTimeInterpolant::local_partial(int ax, int ay, int at, double xi, double eta,
                                           double tau) const {
    using hermite::shape;
    if (ax > 3 || ay > 3 || at > 3) return 0.0;
    double hx[2][2], hy[2][2], ht[2][2];
    for (int f = 0; f < 2; ++f)
        for (int c = 0; c < 2; ++c) {
            hx[f][c] = shape(f, c, ax, xi);
            hy[f][c] = box_.sdim == 2 ? shape(f, c, ay, eta) : 1.0;
            ht[f][c] = shape(f, c, at, tau);
        }
    double acc = 0.0;
    const int nd = dof_count(box_.sdim);
    for (int k = 0; k < nd; ++k) {
        DofInfo d = dof_info(box_.sdim, k);
        double v = hx[d.fx][d.cx] * ht[d.ft][d.ct];
        if (box_.sdim == 2) v *= hy[d.fy][d.cy];
        acc += w_[k] * v;
    }
    return acc;
}

double SpaceTimeInterpolant::partial(int mx, int my, int mt, const Vec2& x, double t) const {
    if (mx < 0 || my < 0 || mt < 0 || mx > 3 || my > 3 || mt > 3)
        throw UnsupportedOrder("per-dimension derivative order must be in 0..3");
    if (box_.sdim == 1 && my != 0) throw UnsupportedOrder("y derivative requested in 1D");

    double xi, eta, tau;
    box_.to_local(x, t, xi, eta, tau);
    constexpr double kMargin = 0.3;  // about one grid cell relative to the box
    if (xi < -kMargin || xi > 1.0 + kMargin || tau < -kMargin || tau > 1.0 + kMargin ||
        (box_.sdim == 2 && (eta < -kMargin || eta > 1.0 + kMargin)))
        throw OutOfBox("interpolant evaluated outside its region box");

    const double it = 1.0 / std::pow(box_.dt, mt);
    if (box_.sdim == 1) {
        return local_partial(mx, 0, mt, xi, eta, tau) / std::pow(box_.ls, mx) * it;
    }
    // Chain rule through the rotation: d/dx = (e1.x dxi + e2.x deta)/ls, same for y.
    const double a = box_.e1.x / box_.ls, b = box_.e2.x / box_.ls;
    const double c = box_.e1.y / box_.ls, d = box_.e2.y / box_.ls;
    double acc = 0.0;
    for (int i = 0; i <= mx; ++i) {
        for (int j = 0; j <= my; ++j) {
            double coef = binom(mx, i) * std::pow(a, i) * std::pow(b, mx - i) * binom(my, j) *
                          std::pow(c, j) * std::pow(d, my - j);
            if (coef == 0.0) continue;
            acc += coef * local_partial(i + j, (mx - i) + (my - j), mt, xi, eta, tau);
        }
    }
    return acc * it;
}

}  // namespace cfm
