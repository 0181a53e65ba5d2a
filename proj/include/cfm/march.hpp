#pragma once

#include <memory>
#include <vector>

#include "cfm/cfsolve.hpp"
#include "cfm/grid.hpp"
#include "cfm/problems.hpp"
#include "cfm/regions.hpp"
#include "cfm/stencil.hpp"

namespace cfm {

/// Largest stable dt/dx for RK4 with the five-point stencil: the imaginary-axis
/// bound 2*sqrt(2) against the operator's spectral radius c*sqrt(dim*16/3)/dx.
double stability_limit(double c, int dim);

/// Correction values matched to what each RK4 stage implicitly represents:
/// truncated Taylor forms of D built from its time derivatives at t0.
struct StageCorrectionSet {
    double k1, k2, k3, k4;
};

StageCorrectionSet stage_corrections(const SpaceTimeInterpolant& D, const Vec2& tap, double t0,
                                     double dt);

/// The naive alternative: D evaluated directly at t0, t0+dt/2, t0+dt. Kept as
/// an ablation; it costs two orders of global accuracy.
StageCorrectionSet naive_corrections(const SpaceTimeInterpolant& D, const Vec2& tap, double t0,
                                     double dt);

enum class Stepper { kModified, kNaive };
enum class CorrectionMode { kLeastSquares, kExact };

/// Projects an analytic correction function onto a region's Hermite DOFs
/// (exact when the field is cubic per dimension; used to isolate stage logic).
SpaceTimeInterpolant exact_interpolant(const FieldExpr& D, const Region& region, double t0,
                                       double dt);

/// Scratch fields reused across steps.
struct MarchScratch {
    std::vector<double> lap, us, vs, acc_u, acc_v;
    std::vector<double> source[4];  // per-stage correction sources, per affected node
    void resize(std::size_t nodes, std::size_t affected);
};

/// Advances state by one RK4 step using the per-region interpolants for the
/// slab [t0, t0+dt]. Stage corrections enter as equivalent source terms at the
/// affected nodes.
void rk4_step(WaveState& state, const ProblemSpec& problem, const Grid& grid,
              const SideMap& sidemap, const Tiling& tiling,
              const std::vector<SpaceTimeInterpolant>& interps, double dt, Stepper stepper,
              int threads, MarchScratch& scratch);

struct MarchOptions {
    Stepper stepper = Stepper::kModified;
    CorrectionMode corrections = CorrectionMode::kLeastSquares;
    CFOptions cf;
    double l_factor = 4.0;
    int threads = 0;
    bool collect_diagnostics = false;
};

/// Owns the static geometry (side map, tiling) and the per-step pipeline:
/// solve the correction function on every region, then take the RK4 step.
class Marcher {
  public:
    Marcher(ProblemSpec problem, Grid grid, MarchOptions options);

    void step(double dt);

    const WaveState& state() const { return state_; }
    WaveState& state() { return state_; }
    const Grid& grid() const { return grid_; }
    const SideMap& sidemap() const { return sidemap_; }
    const Tiling& tiling() const { return tiling_; }
    const ProblemSpec& problem() const { return problem_; }
    const std::vector<SpaceTimeInterpolant>& last_interpolants() const { return interps_; }
    const std::vector<SolveInfo>& last_solve_info() const { return solve_info_; }

    /// Samples branch-wise initial data h, k into the state at t = 0.
    void reset_initial_state();

  private:
    ProblemSpec problem_;
    Grid grid_;
    MarchOptions options_;
    SideMap sidemap_;
    Tiling tiling_;
    WaveState state_;
    MarchScratch scratch_;
    std::unique_ptr<Assembler> assembler_;  // for the nominal dt, built lazily
    double assembler_dt_ = -1.0;
    std::vector<SpaceTimeInterpolant> interps_;
    std::vector<SolveInfo> solve_info_;
};

}  // namespace cfm
