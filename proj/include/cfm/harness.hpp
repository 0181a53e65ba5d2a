#pragma once

#include <span>
#include <string>
#include <vector>

#include "cfm/march.hpp"

namespace cfm {

struct RunConfig {
    std::string problem_id = "line1d";
    std::vector<int> n_list = {100};
    double gamma = 0.0;   // dt/dx; 0 means take dt_rule or the problem default
    std::string dt_rule;  // "gamma=<x>" or "cfl=<x>" meaning dt = x*dx/c
    double l_factor = 4.0;
    double c1 = 1.0, c2 = 1.0;
    double t_end = -1.0;  // < 0 means the problem default
    double c_em = 1.0;    // wave speed for em-shield
    int threads = 0;      // 0 = all available
    std::string out_dir = "out";
    int snapshot_every = 0;  // also write a snapshot every k steps
    bool dump_tiling = false;
    bool diagnostics = false;

    void validate() const;
};

/// Loads key=value lines (comments with '#') into a config.
RunConfig load_config_file(const std::string& path);

ProblemSpec problem_from_config(const RunConfig& cfg);
double resolve_gamma(const ProblemSpec& problem, const RunConfig& cfg);

/// Space-time error norms accumulated over every stored time level (t = 0
/// included): L2 = sqrt(sum e^2 / (Nx*Nt)), Linf = max |e|.
struct ErrorReport {
    int n = 0;
    int nt_levels = 0;
    double dx = 0.0, dt = 0.0;
    double l2 = 0.0, linf = 0.0;
    std::vector<double> step_l2, step_linf;  // per-level norms
    bool unstable = false;
    int unstable_step = -1;
};

/// Blow-up surrogate for the paper-style visual criterion: unstable once
/// max|u| exceeds ratio times the exact solution's running max.
struct Detector {
    bool enabled = false;
    double ratio = 10.0;
};

ErrorReport run_simulation(const ProblemSpec& problem, int n, const RunConfig& cfg,
                           Stepper stepper = Stepper::kModified, Detector detector = {},
                           const std::string& out_base = "");

struct OrderFit {
    double l2 = 0.0;
    double linf = 0.0;
};

/// Least-squares slope of log(err) against log(dx).
double fit_order(std::span<const double> dx, std::span<const double> err);
OrderFit fit_orders(const std::vector<ErrorReport>& reports);

std::vector<ErrorReport> converge(const RunConfig& cfg, Stepper stepper = Stepper::kModified);

struct StabilityRow {
    int n = 0;
    double gamma_t = 0.0, gamma_c = 0.0, gamma_cfm = 0.0;
};

/// Bisects the empirical stability limit in gamma = dt/dx over [1.0, 1.5]
/// (8 iterations) for both the interface problem and its continuous variant.
std::vector<StabilityRow> stability_sweep(const RunConfig& cfg);
double bisect_stability(const ProblemSpec& problem, int n, const RunConfig& cfg);

struct AblationResult {
    OrderFit modified, naive;
    std::vector<ErrorReport> runs_modified, runs_naive;
};

AblationResult ablation(const RunConfig& cfg);

struct CalibrationEntry {
    double c1 = 0.0, c2 = 0.0, l2 = 0.0, linf = 0.0;
};
struct CalibrationResult {
    std::vector<CalibrationEntry> table;
    CalibrationEntry best;
};

/// Coarse-grid sweep of the penalty coefficients over {1e-2, 1, 1e2}^2.
CalibrationResult calibrate(const RunConfig& cfg);

// Deterministic writers (%.17g formatting, fixed ordering).
void write_errors_csv(const std::string& path, const std::vector<ErrorReport>& rows);
void write_order_json(const std::string& path, const OrderFit& fit);
void write_stability_csv(const std::string& path, const std::vector<StabilityRow>& rows);
void write_run_json(const std::string& path, const std::string& problem_id, const ErrorReport& r);
void write_steps_csv(const std::string& path, const ErrorReport& r);

}  // namespace cfm
