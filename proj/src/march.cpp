#include "cfm/march.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cfm/errors.hpp"

namespace cfm {

double stability_limit(double c, int dim) {
    return 2.0 * std::sqrt(2.0) / (c * std::sqrt(stencil_spectral_bound(dim)));
}

StageCorrectionSet stage_corrections(const SpaceTimeInterpolant& D, const Vec2& tap, double t0,
                                     double dt) {
    const double d0 = D.partial(0, 0, 0, tap, t0);
    const double d1 = D.partial(0, 0, 1, tap, t0);
    const double d2 = D.partial(0, 0, 2, tap, t0);
    const double d3 = D.partial(0, 0, 3, tap, t0);
    StageCorrectionSet s;
    s.k1 = d0;
    s.k2 = d0 + 0.5 * dt * d1;
    s.k3 = d0 + 0.5 * dt * d1 + 0.25 * dt * dt * d2;
    s.k4 = d0 + dt * d1 + 0.5 * dt * dt * d2 + 0.25 * dt * dt * dt * d3;
    return s;
}

StageCorrectionSet naive_corrections(const SpaceTimeInterpolant& D, const Vec2& tap, double t0,
                                     double dt) {
    StageCorrectionSet s;
    s.k1 = D.eval(tap, t0);
    s.k2 = s.k3 = D.eval(tap, t0 + 0.5 * dt);
    s.k4 = D.eval(tap, t0 + dt);
    return s;
}

SpaceTimeInterpolant exact_interpolant(const FieldExpr& D, const Region& region, double t0,
                                       double dt) {
    const BoxMap map = region.map(t0, dt);
    const int nd = dof_count(map.sdim);
    std::vector<double> w(nd);
    for (int k = 0; k < nd; ++k) {
        DofInfo d = dof_info(map.sdim, k);
        const Vec2 x = map.map_space(d.cx, d.cy);
        const double t = map.map_time(d.ct);
        double val = 0.0;
        if (map.sdim == 1) {
            val = D.partial(d.fx, 0, d.ft, x, t);
        } else {
            // Local xi/eta derivatives chain through the frame axes.
            const Vec2 e1 = map.e1, e2 = map.e2;
            if (!d.fx && !d.fy) {
                val = D.partial(0, 0, d.ft, x, t);
            } else if (d.fx && !d.fy) {
                val = e1.x * D.partial(1, 0, d.ft, x, t) + e1.y * D.partial(0, 1, d.ft, x, t);
            } else if (!d.fx && d.fy) {
                val = e2.x * D.partial(1, 0, d.ft, x, t) + e2.y * D.partial(0, 1, d.ft, x, t);
            } else {
                val = e1.x * e2.x * D.partial(2, 0, d.ft, x, t) +
                      (e1.x * e2.y + e1.y * e2.x) * D.partial(1, 1, d.ft, x, t) +
                      e1.y * e2.y * D.partial(0, 2, d.ft, x, t);
            }
        }
        // Scale to unit-cube derivatives.
        val *= std::pow(map.ls, d.fx + d.fy) * std::pow(map.dt, d.ft);
        w[k] = val;
    }
    return SpaceTimeInterpolant(map, std::move(w));
}

void MarchScratch::resize(std::size_t nodes, std::size_t affected) {
    lap.resize(nodes);
    us.resize(nodes);
    vs.resize(nodes);
    acc_u.resize(nodes);
    acc_v.resize(nodes);
    for (auto& s : source) s.assign(affected, 0.0);
}

namespace {

void compute_sources(const SideMap& sidemap, const std::vector<SpaceTimeInterpolant>& interps,
                     double t0, double dt, Stepper stepper, int threads, MarchScratch& scratch) {
    const int count = static_cast<int>(sidemap.affected.size());
    std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int k = 0; k < count; ++k) {
        try {
            const AffectedNode& an = sidemap.affected[k];
            const int node_side = sidemap.side[an.node];
            double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
            for (const TapRef& tap : an.taps) {
                StageCorrectionSet cs = stepper == Stepper::kModified
                                            ? stage_corrections(interps[k], tap.pos, t0, dt)
                                            : naive_corrections(interps[k], tap.pos, t0, dt);
                const double f = tap.coef * node_side;
                s1 += f * cs.k1;
                s2 += f * cs.k2;
                s3 += f * cs.k3;
                s4 += f * cs.k4;
            }
            scratch.source[0][k] = s1;
            scratch.source[1][k] = s2;
            scratch.source[2][k] = s3;
            scratch.source[3][k] = s4;
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (int k = 0; k < count; ++k)
        if (errors[k]) std::rethrow_exception(errors[k]);
}

}  // namespace

void rk4_step(WaveState& state, const ProblemSpec& problem, const Grid& grid,
              const SideMap& sidemap, const Tiling& tiling,
              const std::vector<SpaceTimeInterpolant>& interps, double dt, Stepper stepper,
              int threads, MarchScratch& scratch) {
    if (interps.size() != tiling.regions.size() ||
        tiling.regions.size() != sidemap.affected.size())
        throw MissingCorrection(-1, "correction interpolants do not cover the tiling");

#ifdef _OPENMP
    if (threads <= 0) threads = omp_get_max_threads();
#else
    threads = 1;
#endif

    const int nodes = grid.node_count();
    const double t0 = state.t;
    const double c2 = problem.c * problem.c;
    const bool forced = !problem.f_plus.empty() || !problem.f_minus.empty();
    scratch.resize(nodes, sidemap.affected.size());
    if (!sidemap.affected.empty())
        compute_sources(sidemap, interps, t0, dt, stepper, threads, scratch);

    double* u = state.u.data();
    double* v = state.v.data();
    double* lap = scratch.lap.data();
    double* us = scratch.us.data();
    double* vs = scratch.vs.data();
    double* au = scratch.acc_u.data();
    double* av = scratch.acc_v.data();

    auto add_sources = [&](int stage) {
        const double* s = scratch.source[stage].data();
        for (std::size_t k = 0; k < sidemap.affected.size(); ++k)
            lap[sidemap.affected[k].node] += s[k];
    };
    auto forcing = [&](int node, double t) {
        return forced ? problem.f(grid.node_pos(node), t, sidemap.side[node]) : 0.0;
    };

    // Stage 1 at t0.
    laplacian_field(state.u, grid, scratch.lap, threads);
    add_sources(0);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int i = 0; i < nodes; ++i) {
        const double ku = v[i];
        const double kv = c2 * (lap[i] - forcing(i, t0));
        au[i] = ku;
        av[i] = kv;
        us[i] = u[i] + 0.5 * dt * ku;
        vs[i] = v[i] + 0.5 * dt * kv;
    }

    // Stage 2 at t0 + dt/2.
    laplacian_field(scratch.us, grid, scratch.lap, threads);
    add_sources(1);
    const double th = t0 + 0.5 * dt;
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int i = 0; i < nodes; ++i) {
        const double ku = vs[i];
        const double kv = c2 * (lap[i] - forcing(i, th));
        au[i] += 2.0 * ku;
        av[i] += 2.0 * kv;
        us[i] = u[i] + 0.5 * dt * ku;
        vs[i] = v[i] + 0.5 * dt * kv;
    }

    // Stage 3, also at t0 + dt/2 but with its own correction form.
    laplacian_field(scratch.us, grid, scratch.lap, threads);
    add_sources(2);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int i = 0; i < nodes; ++i) {
        const double ku = vs[i];
        const double kv = c2 * (lap[i] - forcing(i, th));
        au[i] += 2.0 * ku;
        av[i] += 2.0 * kv;
        us[i] = u[i] + dt * ku;
        vs[i] = v[i] + dt * kv;
    }

    // Stage 4 at t0 + dt.
    laplacian_field(scratch.us, grid, scratch.lap, threads);
    add_sources(3);
    const double t1 = t0 + dt;
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int i = 0; i < nodes; ++i) {
        const double ku = vs[i];
        const double kv = c2 * (lap[i] - forcing(i, t1));
        au[i] += ku;
        av[i] += kv;
        u[i] += dt / 6.0 * au[i];
        v[i] += dt / 6.0 * av[i];
    }
    state.t = t1;
}

Marcher::Marcher(ProblemSpec problem, Grid grid, MarchOptions options)
    : problem_(std::move(problem)), grid_(grid), options_(options) {
    if (problem_.curve) {
        sidemap_ = classify_nodes(grid_, *problem_.curve);
        if (!sidemap_.affected.empty())
            tiling_ = build_tiling(sidemap_, *problem_.curve, grid_, options_.l_factor,
                                   options_.threads);
    } else {
        sidemap_.side.assign(grid_.node_count(), -1);
    }
    reset_initial_state();
}

void Marcher::reset_initial_state() {
    const int nodes = grid_.node_count();
    state_.u.resize(nodes);
    state_.v.resize(nodes);
    state_.t = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const Vec2 p = grid_.node_pos(i);
        const int s = sidemap_.side[i];
        state_.u[i] = problem_.u(p, 0.0, s);
        state_.v[i] = problem_.dudt(p, 0.0, s);
    }
}

void Marcher::step(double dt) {
    if (!tiling_.regions.empty()) {
        if (options_.corrections == CorrectionMode::kLeastSquares) {
            if (!assembler_ || assembler_dt_ != dt) {
                assembler_ = std::make_unique<Assembler>(grid_.dim, tiling_.side, dt, problem_.c,
                                                         options_.cf);
                assembler_dt_ = dt;
            }
            interps_ = solve_regions(tiling_, problem_, *assembler_, state_.t, options_.threads,
                                     options_.collect_diagnostics ? &solve_info_ : nullptr);
        } else {
            const FieldExpr D = problem_.jump_field();
            interps_.resize(tiling_.regions.size());
            for (std::size_t k = 0; k < tiling_.regions.size(); ++k)
                interps_[k] = exact_interpolant(D, tiling_.regions[k], state_.t, dt);
        }
    }
    rk4_step(state_, problem_, grid_, sidemap_, tiling_, interps_, dt, options_.stepper,
             options_.threads, scratch_);
}

}  // namespace cfm
