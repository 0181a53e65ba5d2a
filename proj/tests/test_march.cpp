#include <doctest.h>

#include <cmath>
#include <vector>

#include "cfm/harness.hpp"
#include "cfm/march.hpp"
#include "oracles.hpp"

using namespace cfm;

namespace {

// Interpolant encoding a pure function of time on a 1D unit box with dt = 0.1.
SpaceTimeInterpolant time_poly(std::array<double, 4> coeffs) {
    BoxMap box;
    box.sdim = 1;
    box.origin = {0.0, 0.0};
    box.ls = 1.0;
    box.t0 = 0.0;
    box.dt = 0.1;
    Region region;
    region.box = {1, {0.5, 0.0}, {1, 0}, {0, 1}, 1.0};
    Term tm;
    tm.ft = Factor::cubic(coeffs);
    return exact_interpolant(FieldExpr({tm}), region, 0.0, 0.1);
}

ErrorReport run_line1d(int n, Stepper stepper, CorrectionMode mode, double gamma = 1.0,
                       double t_end = 1.0) {
    ProblemSpec problem = problem_1d_two_interfaces();
    Grid grid(1, 0.0, 1.0, n);
    MarchOptions opts;
    opts.stepper = stepper;
    opts.corrections = mode;
    Marcher marcher(problem, grid, opts);

    const double dt = gamma * grid.dx;
    const int steps = static_cast<int>(std::round(t_end / dt));
    ErrorReport rep;
    rep.n = n;
    rep.dx = grid.dx;
    rep.dt = dt;
    double sumsq = 0.0, linf = 0.0;
    auto level = [&]() {
        for (int i = 0; i < grid.node_count(); ++i) {
            double e = marcher.state().u[i] -
                       problem.u(grid.node_pos(i), marcher.state().t, marcher.sidemap().side[i]);
            sumsq += e * e;
            linf = std::max(linf, std::abs(e));
        }
    };
    level();
    for (int s = 0; s < steps; ++s) {
        marcher.step(dt);
        level();
    }
    rep.nt_levels = steps + 1;
    rep.l2 = std::sqrt(sumsq / (static_cast<double>(grid.node_count()) * rep.nt_levels));
    rep.linf = linf;
    return rep;
}

}  // namespace

TEST_CASE("stability limit: closed forms and Table-consistency") {
    CHECK(stability_limit(1.0, 1) == doctest::Approx(std::sqrt(6.0) / 2.0).epsilon(1e-14));
    CHECK(stability_limit(1.0, 2) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
    // the 2D experiments run at c = 1/sqrt(2), where the dt/dx bound matches 1D
    CHECK(stability_limit(1.0 / std::sqrt(2.0), 2) ==
          doctest::Approx(std::sqrt(6.0) / 2.0).epsilon(1e-14));
    CHECK(std::abs(stability_limit(1.0, 1) - 1.23) < 0.01);
}

TEST_CASE("stage corrections for D = t^2 and D = t^3") {
    const double dt = 0.1;
    SpaceTimeInterpolant d2 = time_poly({0, 0, 1, 0});  // t^2
    StageCorrectionSet s2 = stage_corrections(d2, {0.5, 0.0}, 0.0, dt);
    CHECK(s2.k1 == doctest::Approx(0.0).scale(1.0));
    CHECK(s2.k2 == doctest::Approx(0.0).scale(1.0));
    CHECK(s2.k3 == doctest::Approx(0.005).epsilon(1e-12));
    CHECK(s2.k4 == doctest::Approx(0.01).epsilon(1e-12));

    SpaceTimeInterpolant d3 = time_poly({0, 0, 0, 1});  // t^3
    StageCorrectionSet s3 = stage_corrections(d3, {0.5, 0.0}, 0.0, dt);
    CHECK(s3.k1 == doctest::Approx(0.0).scale(1.0));
    CHECK(s3.k2 == doctest::Approx(0.0).scale(1.0));
    CHECK(s3.k3 == doctest::Approx(0.0).scale(1.0));
    CHECK(s3.k4 == doctest::Approx(0.1 * 0.1 * 0.1 / 4.0 * 6.0).epsilon(1e-12));

    SpaceTimeInterpolant dc = time_poly({2.5, 0, 0, 0});  // constant
    StageCorrectionSet sc = stage_corrections(dc, {0.5, 0.0}, 0.0, dt);
    CHECK(sc.k1 == doctest::Approx(2.5));
    CHECK(sc.k2 == doctest::Approx(2.5));
    CHECK(sc.k3 == doctest::Approx(2.5));
    CHECK(sc.k4 == doctest::Approx(2.5));

    // naive corrections sample D directly in time
    StageCorrectionSet n3 = naive_corrections(d3, {0.5, 0.0}, 0.0, dt);
    CHECK(n3.k1 == doctest::Approx(0.0).scale(1.0));
    CHECK(n3.k2 == doctest::Approx(0.05 * 0.05 * 0.05).epsilon(1e-12));
    CHECK(n3.k4 == doctest::Approx(0.001).epsilon(1e-12));
}

TEST_CASE("equilibrium state is preserved exactly") {
    ProblemSpec problem;
    problem.id = "const";
    problem.dim = 1;
    problem.c = 1.0;
    Term tm;
    tm.fx = Factor::cubic({3.0, 0, 0, 0});
    problem.u_minus = FieldExpr({tm});
    problem.u_plus = problem.u_minus;
    Grid grid(1, 0.0, 1.0, 64);
    Marcher marcher(problem, grid, {});
    std::vector<double> u0 = marcher.state().u;
    for (int s = 0; s < 5; ++s) marcher.step(0.01);
    for (int i = 0; i < grid.n; ++i) {
        CHECK(marcher.state().u[i] == u0[i]);
        CHECK(marcher.state().v[i] == 0.0);
    }
}

TEST_CASE("smooth single step converges at fifth order locally") {
    ProblemSpec problem = problem_1d_two_interfaces().continuous_variant();
    Grid grid(1, 0.0, 1.0, 512);
    auto one_step_err = [&](double dt) {
        Marcher marcher(problem, grid, {});
        marcher.step(dt);
        double e = 0.0;
        for (int i = 0; i < grid.n; ++i)
            e = std::max(e, std::abs(marcher.state().u[i] -
                                     problem.u(grid.node_pos(i), dt, -1)));
        return e;
    };
    double ratio = one_step_err(0.05) / one_step_err(0.025);
    CHECK(ratio > 24.0);
    CHECK(ratio < 40.0);
}

TEST_CASE("exact analytic corrections give fourth-order global error") {
    std::vector<double> dxs, errs;
    for (int n : {50, 100, 200}) {
        ErrorReport r = run_line1d(n, Stepper::kModified, CorrectionMode::kExact);
        dxs.push_back(r.dx);
        errs.push_back(r.linf);
    }
    double order = fit_order(dxs, errs);
    CHECK(order > 3.5);
    CHECK(order < 4.6);
}

TEST_CASE("least-squares corrections also reach fourth order on the 1D problem") {
    std::vector<double> dxs, errs;
    for (int n : {50, 100, 200}) {
        ErrorReport r = run_line1d(n, Stepper::kModified, CorrectionMode::kLeastSquares);
        dxs.push_back(r.dx);
        errs.push_back(r.linf);
    }
    double order = fit_order(dxs, errs);
    CHECK(order > 3.5);
    CHECK(order < 4.6);
}

TEST_CASE("ablation: naive stage handling loses two orders") {
    std::vector<double> dxs, errs_mod, errs_naive;
    for (int n : {50, 100, 200}) {
        dxs.push_back(1.0 / n);
        errs_mod.push_back(run_line1d(n, Stepper::kModified, CorrectionMode::kLeastSquares).l2);
        errs_naive.push_back(run_line1d(n, Stepper::kNaive, CorrectionMode::kLeastSquares).l2);
    }
    double order_mod = fit_order(dxs, errs_mod);
    double order_naive = fit_order(dxs, errs_naive);
    CHECK(order_mod >= 3.5);
    CHECK(order_naive <= 2.5);
    CHECK(order_mod - order_naive >= 1.0);
}

TEST_CASE("modified vs naive single-step difference is third order in dt") {
    ProblemSpec problem = problem_1d_two_interfaces();
    Grid grid(1, 0.0, 1.0, 200);
    auto diff = [&](double dt) {
        MarchOptions mod, nai;
        nai.stepper = Stepper::kNaive;
        Marcher a(problem, grid, mod), b(problem, grid, nai);
        a.step(dt);
        b.step(dt);
        double d = 0.0;
        for (int i = 0; i < grid.n; ++i)
            d = std::max(d, std::abs(a.state().u[i] - b.state().u[i]));
        return d;
    };
    double ratio = diff(0.004) / diff(0.002);
    CHECK(ratio > 5.5);
    CHECK(ratio < 11.0);
}

TEST_CASE("no interface: both steppers coincide") {
    ProblemSpec problem = problem_1d_two_interfaces().continuous_variant();
    Grid grid(1, 0.0, 1.0, 100);
    MarchOptions mod, nai;
    nai.stepper = Stepper::kNaive;
    Marcher a(problem, grid, mod), b(problem, grid, nai);
    for (int s = 0; s < 10; ++s) {
        a.step(0.01);
        b.step(0.01);
    }
    for (int i = 0; i < grid.n; ++i) CHECK(a.state().u[i] == b.state().u[i]);
}

TEST_CASE("solution stays bounded below the stability limit") {
    const double gamma = 0.9 * stability_limit(1.0, 1);
    ProblemSpec problem = problem_1d_two_interfaces();
    Grid grid(1, 0.0, 1.0, 100);
    Marcher marcher(problem, grid, {});
    const double dt = gamma * grid.dx;
    double umax = 0.0;
    for (double t = 0.0; t < 1.0; t += dt) {
        marcher.step(dt);
        for (double v : marcher.state().u) umax = std::max(umax, std::abs(v));
    }
    CHECK(umax <= 3.0 * 2.0);  // exact solution peaks at 2
}

TEST_CASE("missing interpolants are rejected") {
    ProblemSpec problem = problem_1d_two_interfaces();
    Grid grid(1, 0.0, 1.0, 100);
    Marcher marcher(problem, grid, {});
    WaveState state = marcher.state();
    MarchScratch scratch;
    std::vector<SpaceTimeInterpolant> empty;
    CHECK_THROWS_AS(rk4_step(state, problem, grid, marcher.sidemap(), marcher.tiling(), empty,
                             0.01, Stepper::kModified, 1, scratch),
                    MissingCorrection);
}
