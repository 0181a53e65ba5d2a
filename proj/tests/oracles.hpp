// Test-only oracles, independent of the implementation paths they check.
#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "cfm/geometry.hpp"

namespace oracles {

/// Dense scan plus golden-section refinement of min_theta |p - pos(theta)|.
inline double closest_param_scan(const std::function<cfm::Vec2(double)>& pos, const cfm::Vec2& p,
                                 double lo, double hi, int samples = 10000) {
    double best = lo, bd = 1e300;
    const double h = (hi - lo) / samples;
    for (int i = 0; i <= samples; ++i) {
        double th = lo + i * h;
        cfm::Vec2 d = pos(th) - p;
        double dd = d.dot(d);
        if (dd < bd) {
            bd = dd;
            best = th;
        }
    }
    double a = best - h, b = best + h;
    const double phi = 0.61803398874989484820;
    auto f = [&](double th) {
        cfm::Vec2 d = pos(th) - p;
        return d.dot(d);
    };
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

/// Arc length of the curve portion inside `inside` by brute-force sampling.
inline double clipped_arc_length(const std::function<cfm::Vec2(double)>& pos,
                                 const std::function<bool(const cfm::Vec2&)>& inside, double lo,
                                 double hi, int samples = 100000) {
    double len = 0.0;
    const double h = (hi - lo) / samples;
    cfm::Vec2 prev = pos(lo);
    for (int i = 1; i <= samples; ++i) {
        cfm::Vec2 cur = pos(lo + i * h);
        if (inside((prev + cur) * 0.5)) len += (cur - prev).norm();
        prev = cur;
    }
    return len;
}

/// Fourth-order central difference of a scalar function of one variable.
inline double fd_derivative(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
}

/// Fourth-order central second difference.
inline double fd_second(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2 * h)) /
           (12.0 * h * h);
}

/// Roots and weights of the Legendre polynomial P6 by Newton iteration.
inline void legendre6(std::vector<double>& roots, std::vector<double>& weights) {
    auto p6 = [](double x) {
        // Bonnet recurrence up to n = 6.
        double p0 = 1.0, p1 = x;
        for (int n = 1; n < 6; ++n) {
            double p2 = ((2 * n + 1) * x * p1 - n * p0) / (n + 1);
            p0 = p1;
            p1 = p2;
        }
        return p1;
    };
    auto dp6 = [&](double x) {
        double p0 = 1.0, p1 = x;
        for (int n = 1; n < 6; ++n) {
            double p2 = ((2 * n + 1) * x * p1 - n * p0) / (n + 1);
            p0 = p1;
            p1 = p2;
        }
        return 6.0 * (x * p1 - p0) / (x * x - 1.0);
    };
    roots.clear();
    weights.clear();
    for (int i = 0; i < 6; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / 6.5);  // standard initial guess
        for (int it = 0; it < 60; ++it) x -= p6(x) / dp6(x);
        roots.push_back(x);
        double d = dp6(x);
        weights.push_back(2.0 / ((1.0 - x * x) * d * d));
    }
}

inline std::mt19937& rng() {
    static std::mt19937 gen(20240517u);
    return gen;
}

inline double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng());
}

}  // namespace oracles
