#include <doctest.h>

#include <cmath>
#include <vector>

#include "cfm/problems.hpp"
#include "oracles.hpp"

using namespace cfm;

namespace {

// Wave-operator forcing recomputed by finite differences of the branch.
double fd_forcing(const FieldExpr& u, double c, const Vec2& p, double t, int dim) {
    const double h = 1e-3;
    double lap = oracles::fd_second([&](double s) { return u.value({s, p.y}, t); }, p.x, h);
    if (dim == 2) lap += oracles::fd_second([&](double s) { return u.value({p.x, s}, t); }, p.y, h);
    double utt = oracles::fd_second([&](double s) { return u.value(p, s); }, t, h);
    return lap - utt / (c * c);
}

double field_scale(const FieldExpr& u, int dim) {
    double m = 1.0;
    for (int i = 0; i < 100; ++i) {
        Vec2 p{oracles::uniform(0.0, 1.0), dim == 2 ? oracles::uniform(0.0, 1.0) : 0.0};
        m = std::max(m, std::abs(u.value(p, oracles::uniform(0.0, 1.0))));
    }
    return m;
}

}  // namespace

TEST_CASE("1D two-interface problem: jump data at the first interface") {
    ProblemSpec p = problem_1d_two_interfaces();
    Vec2 g1{0.3, 0.0};
    CHECK(p.alpha(g1, 0.0) == doctest::Approx(std::sin(0.6 * M_PI)).epsilon(1e-14));
    Vec2 normal = p.curve->frame_at(0.0).normal;
    CHECK(normal.x == doctest::Approx(1.0));
    CHECK(p.beta(g1, 0.0, normal) ==
          doctest::Approx(2.0 * M_PI * std::cos(0.6 * M_PI)).epsilon(1e-13));
    CHECK(p.beta(g1, 0.0, normal) == doctest::Approx(-1.94161).epsilon(1e-5));
    CHECK(p.u({0.5, 0.0}, 0.0, +1) == doctest::Approx(0.0).scale(1.0));
    // unit speed means the sine branches satisfy the homogeneous equation
    CHECK(p.c == 1.0);
    CHECK(p.f_plus.empty());
    CHECK(p.f_minus.empty());
}

TEST_CASE("circle problem: values on the east interface point") {
    ProblemSpec p = problem_circle();
    Vec2 east{0.75, 0.5};
    CHECK(p.alpha(east, 0.0) == doctest::Approx(0.0).scale(1.0));  // sin(pi) factor
    CHECK(p.u({0.5, 0.5}, 0.0, -1) == doctest::Approx(0.0).scale(1.0));
    Vec2 normal = p.curve->frame_at(0.0).normal;
    CHECK(p.beta(east, 0.0, normal) == doctest::Approx(0.0).scale(1.0));
    // the branches solve the free wave equation at speed 1/sqrt(2)
    CHECK(p.c == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(p.f_plus.empty());
    CHECK(p.f_minus.empty());
}

TEST_CASE("star problem: zero outer branch makes the jumps pure interior traces") {
    ProblemSpec p = problem_star();
    CHECK((p.curve->position(0.0) - Vec2{0.75, 0.5}).norm() < 1e-14);
    CHECK(p.f_minus.empty());  // e^{pi x} sin(3 pi y) cos(2 pi t) is dispersion-free at c = 1/sqrt2
    for (int i = 0; i < 100; ++i) {
        double th = oracles::uniform(0.0, 2.0 * M_PI);
        double t = oracles::uniform(0.0, 1.0);
        Vec2 pos = p.curve->position(th);
        CHECK(p.alpha(pos, t) == doctest::Approx(-p.u_minus.value(pos, t)).epsilon(1e-13));
        Vec2 n = p.curve->frame_at(th).normal;
        double grad_n = n.x * p.u_minus.partial(1, 0, 0, pos, t) +
                        n.y * p.u_minus.partial(0, 1, 0, pos, t);
        CHECK(p.beta(pos, t, n) == doctest::Approx(-grad_n).epsilon(1e-13));
    }
}

TEST_CASE("osculating problem: interior exponential and genuine forcing") {
    ProblemSpec p = problem_osculating();
    CHECK(p.u({0.5, 0.5}, 0.0, -1) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
    CHECK(p.f_plus.empty());
    CHECK(!p.f_minus.empty());
    // f- = (2 + 8 pi^2) e^{x+y} cos(2 pi t) at c^2 = 1/2
    for (int i = 0; i < 50; ++i) {
        Vec2 pos{oracles::uniform(0.2, 0.8), oracles::uniform(0.2, 0.8)};
        double t = oracles::uniform(0.0, 1.0);
        double expect = (2.0 + 8.0 * M_PI * M_PI) * std::exp(pos.x + pos.y) *
                        std::cos(2.0 * M_PI * t);
        CHECK(p.f(pos, t, -1) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("em shielding: dispersion-free plane wave, period, pure traces") {
    ProblemSpec p = problem_em_shielding();
    CHECK(p.f_plus.empty());  // omega^2 = 8 pi^2 c^2 kills the forcing exactly
    CHECK(p.f_minus.empty());
    CHECK(p.t_end_default == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(p.default_gamma == doctest::Approx(0.75));

    // plane wave values
    for (int i = 0; i < 50; ++i) {
        Vec2 pos{oracles::uniform(-0.5, 0.5), oracles::uniform(-0.5, 0.5)};
        double t = oracles::uniform(0.0, 0.5);
        double omega = 2.0 * std::sqrt(2.0) * M_PI;
        double expect = std::sin(2.0 * M_PI * (pos.x + pos.y) - omega * t);
        CHECK(p.u(pos, t, +1) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(p.u(pos, t, -1) == 0.0);
    }

    ProblemSpec phys = problem_em_shielding(299792458.0);
    CHECK(phys.t_end_default == doctest::Approx(2.359e-9).epsilon(1e-3));
    CHECK(phys.f_plus.empty());
}

TEST_CASE("forcing identity f = lap u - u_tt / c^2 against finite differences") {
    std::vector<ProblemSpec> problems = {problem_1d_two_interfaces(), problem_circle(),
                                         problem_star(), problem_osculating(),
                                         problem_em_shielding()};
    for (const auto& p : problems) {
        const double scale =
            std::max(field_scale(p.f_plus, p.dim), field_scale(p.f_minus, p.dim));
        for (int i = 0; i < 1000; ++i) {
            Vec2 pos{oracles::uniform(p.lower + 0.1, p.upper - 0.1),
                     p.dim == 2 ? oracles::uniform(p.lower + 0.1, p.upper - 0.1) : 0.0};
            double t = oracles::uniform(0.0, 1.0);
            double fd_p = fd_forcing(p.u_plus, p.c, pos, t, p.dim);
            double fd_m = fd_forcing(p.u_minus, p.c, pos, t, p.dim);
            REQUIRE(p.f(pos, t, +1) == doctest::Approx(fd_p).epsilon(1e-6).scale(scale));
            REQUIRE(p.f(pos, t, -1) == doctest::Approx(fd_m).epsilon(1e-6).scale(scale));
        }
    }
}

TEST_CASE("jump data is consistent with branch differences on the curve") {
    std::vector<ProblemSpec> problems = {problem_1d_two_interfaces(), problem_circle(),
                                         problem_star(), problem_osculating(),
                                         problem_em_shielding()};
    for (const auto& p : problems) {
        const double lo = p.curve->theta_min(), hi = p.curve->theta_max();
        auto corners = p.curve->corner_params();
        for (int i = 0; i < 1000; ++i) {
            double th = p.dim == 1 ? static_cast<double>(i % 2)
                                   : oracles::uniform(lo, hi);
            bool near_corner = false;
            for (double c : corners)
                if (std::abs(th - c) < 1e-3) near_corner = true;
            if (near_corner) continue;
            double t = oracles::uniform(0.0, 1.0);
            Vec2 pos = p.curve->position(th);
            double du = p.u_plus.value(pos, t) - p.u_minus.value(pos, t);
            REQUIRE(p.alpha(pos, t) == doctest::Approx(du).epsilon(1e-12).scale(1.0));

            Vec2 n = p.curve->frame_at(th).normal;
            // directional difference oracle along the normal
            auto along = [&](double s) {
                Vec2 q = pos + n * s;
                return p.u_plus.value(q, t) - p.u_minus.value(q, t);
            };
            double beta_fd = oracles::fd_derivative(along, 0.0, 1e-4);
            REQUIRE(p.beta(pos, t, n) == doctest::Approx(beta_fd).epsilon(1e-9).scale(10.0));
        }
    }
}

TEST_CASE("continuous variant drops the interface and keeps the minus branch") {
    ProblemSpec p = problem_circle().continuous_variant();
    CHECK(p.curve == nullptr);
    for (int i = 0; i < 20; ++i) {
        Vec2 pos{oracles::uniform(0.0, 1.0), oracles::uniform(0.0, 1.0)};
        double t = oracles::uniform(0.0, 1.0);
        CHECK(p.u(pos, t, +1) == p.u(pos, t, -1));
    }
}

TEST_CASE("unknown problem ids are rejected") {
    CHECK_THROWS(make_problem("donut"));
    CHECK_NOTHROW(make_problem("em-shield", 2.0));
    CHECK_THROWS(make_problem("em-shield", -1.0));
}
