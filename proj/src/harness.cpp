#include "cfm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cfm/errors.hpp"

namespace cfm {

void RunConfig::validate() const {
    if (n_list.empty()) throw ConfigError("at least one grid size is required");
    for (int n : n_list)
        if (n < 8) throw ConfigError("grid sizes must be >= 8");
    if (l_factor < 3.0 || l_factor > 5.0) throw ConfigError("l-factor must lie in [3, 5]");
    if (c1 <= 0.0 || c2 <= 0.0) throw ConfigError("penalty coefficients must be positive");
    if (gamma < 0.0) throw ConfigError("gamma must be positive");
    if (threads < 0) throw ConfigError("threads must be >= 0");
    if (snapshot_every < 0) throw ConfigError("snapshot-every must be >= 0");
    if (c_em <= 0.0) throw ConfigError("wave speed must be positive");
    if (!dt_rule.empty() && dt_rule.find('=') == std::string::npos)
        throw ConfigError("dt-rule must look like gamma=<x> or cfl=<x>");
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    RunConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t\r"));
            auto e = s.find_last_not_of(" \t\r");
            s.erase(e == std::string::npos ? 0 : e + 1);
            return s;
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "problem") cfg.problem_id = val;
        else if (key == "n") {
            cfg.n_list.clear();
            std::stringstream ss(val);
            std::string tok;
            while (std::getline(ss, tok, ',')) cfg.n_list.push_back(std::stoi(tok));
        } else if (key == "gamma") cfg.gamma = std::stod(val);
        else if (key == "dt-rule") cfg.dt_rule = val;
        else if (key == "l-factor") cfg.l_factor = std::stod(val);
        else if (key == "c1") cfg.c1 = std::stod(val);
        else if (key == "c2") cfg.c2 = std::stod(val);
        else if (key == "t-end") cfg.t_end = std::stod(val);
        else if (key == "c") cfg.c_em = std::stod(val);
        else if (key == "threads") cfg.threads = std::stoi(val);
        else if (key == "out") cfg.out_dir = val;
        else if (key == "snapshot-every") cfg.snapshot_every = std::stoi(val);
        else if (key == "dump-tiling") cfg.dump_tiling = (val == "1" || val == "true");
        else if (key == "diagnostics") cfg.diagnostics = (val == "1" || val == "true");
        else throw ConfigError("unknown config key: " + key);
    }
    return cfg;
}

ProblemSpec problem_from_config(const RunConfig& cfg) {
    return make_problem(cfg.problem_id, cfg.c_em);
}

double resolve_gamma(const ProblemSpec& problem, const RunConfig& cfg) {
    if (cfg.gamma > 0.0) return cfg.gamma;
    if (!cfg.dt_rule.empty()) {
        auto eq = cfg.dt_rule.find('=');
        std::string kind = cfg.dt_rule.substr(0, eq);
        double val = std::stod(cfg.dt_rule.substr(eq + 1));
        if (val <= 0.0) throw ConfigError("dt-rule value must be positive");
        if (kind == "gamma") return val;
        if (kind == "cfl") return val / problem.c;
        throw ConfigError("dt-rule must be gamma=<x> or cfl=<x>");
    }
    return problem.default_gamma;
}

namespace {

struct LevelNorms {
    double sumsq = 0.0;
    double linf = 0.0;
    double exact_max = 0.0;
    double field_max = 0.0;
};

LevelNorms accumulate_level(const ProblemSpec& problem, const Grid& grid, const SideMap& sidemap,
                            const WaveState& state) {
    LevelNorms out;
    const int nodes = grid.node_count();
    for (int i = 0; i < nodes; ++i) {
        const double ue = problem.u(grid.node_pos(i), state.t, sidemap.side[i]);
        const double e = state.u[i] - ue;
        out.sumsq += e * e;
        out.linf = std::max(out.linf, std::abs(e));
        out.exact_max = std::max(out.exact_max, std::abs(ue));
        out.field_max = std::max(out.field_max, std::abs(state.u[i]));
    }
    return out;
}

void write_region_diagnostics(const std::string& path, const ProblemSpec& problem,
                              const Marcher& marcher, double dt) {
    if (marcher.tiling().regions.empty()) return;
    Assembler assembler(marcher.grid().dim, marcher.tiling().side, dt, problem.c,
                        CFOptions{});
    nlohmann::json arr = nlohmann::json::array();
    for (const Region& region : marcher.tiling().regions) {
        CFSystem sys = assembler.assemble(region, problem, 0.0);
        SolveInfo si;
        std::vector<double> w = solve(sys, assembler.options(), &si);
        double wn = 0.0;
        for (double x : w) wn += x * x;
        nlohmann::json jr;
        jr["node"] = region.owner;
        jr["cond"] = si.cond;
        jr["jp_min"] = residual(sys, w);
        jr["w_norm"] = std::sqrt(wn);
        arr.push_back(jr);
    }
    std::ofstream out(path);
    out << arr.dump(2) << "\n";
}

}  // namespace

ErrorReport run_simulation(const ProblemSpec& problem, int n, const RunConfig& cfg,
                           Stepper stepper, Detector detector, const std::string& out_base) {
    Grid grid(problem.dim, problem.lower, problem.upper, n);
    const double gamma = resolve_gamma(problem, cfg);
    const double dt = gamma * grid.dx;
    const double t_end = cfg.t_end >= 0.0 ? cfg.t_end : problem.t_end_default;

    MarchOptions options;
    options.stepper = stepper;
    options.cf.c1 = cfg.c1;
    options.cf.c2 = cfg.c2;
    options.l_factor = cfg.l_factor;
    options.threads = cfg.threads;
    Marcher marcher(problem, grid, options);

    if (cfg.dump_tiling && !out_base.empty())
        dump_tiling_json(marcher.tiling(), out_base + "_tiling.json");
    if (cfg.diagnostics && !out_base.empty())
        write_region_diagnostics(out_base + "_diagnostics.json", problem, marcher, dt);

    ErrorReport report;
    report.n = n;
    report.dx = grid.dx;
    report.dt = dt;

    int full_steps = 0;
    double rem = 0.0;
    if (t_end > 0.0) {
        full_steps = static_cast<int>(std::floor(t_end / dt + 1e-9));
        rem = t_end - full_steps * dt;
        if (rem <= 1e-9 * dt) rem = 0.0;
    }
    const int total_steps = full_steps + (rem > 0.0 ? 1 : 0);

    double sumsq = 0.0, linf = 0.0, exact_max = 1e-12;
    auto level = accumulate_level(problem, grid, marcher.sidemap(), marcher.state());
    sumsq += level.sumsq;
    linf = std::max(linf, level.linf);
    exact_max = std::max(exact_max, level.exact_max);
    report.step_l2.push_back(std::sqrt(level.sumsq / grid.node_count()));
    report.step_linf.push_back(level.linf);

    for (int step = 0; step < total_steps; ++step) {
        const double dts = step < full_steps ? dt : rem;
        marcher.step(dts);
        level = accumulate_level(problem, grid, marcher.sidemap(), marcher.state());
        sumsq += level.sumsq;
        linf = std::max(linf, level.linf);
        exact_max = std::max(exact_max, level.exact_max);
        report.step_l2.push_back(std::sqrt(level.sumsq / grid.node_count()));
        report.step_linf.push_back(level.linf);

        // NaN comparisons are false, so test the sum: additions propagate non-finites.
        const bool finite = std::isfinite(level.sumsq) && std::isfinite(level.field_max);
        if (!finite || (detector.enabled && level.field_max > detector.ratio * exact_max)) {
            report.unstable = true;
            report.unstable_step = step;
            if (!detector.enabled)
                throw SimulationUnstable(step, "non-finite field values at step " +
                                                   std::to_string(step));
            break;
        }

        if (!out_base.empty() && cfg.snapshot_every > 0 && (step + 1) % cfg.snapshot_every == 0) {
            char name[64];
            std::snprintf(name, sizeof(name), "_snapshot_%06d", step + 1);
            write_snapshot(grid, marcher.state(), out_base + name, problem.id);
        }
    }

    report.nt_levels = static_cast<int>(report.step_l2.size());
    report.l2 = std::sqrt(sumsq / (static_cast<double>(grid.node_count()) * report.nt_levels));
    report.linf = linf;

    if (!out_base.empty() && !report.unstable)
        write_snapshot(grid, marcher.state(), out_base + "_snapshot_final", problem.id);
    return report;
}

double fit_order(std::span<const double> dx, std::span<const double> err) {
    const std::size_t m = dx.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = std::log(dx[i]);
        const double y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

OrderFit fit_orders(const std::vector<ErrorReport>& reports) {
    std::vector<double> dx, e2, ei;
    for (const auto& r : reports) {
        dx.push_back(r.dx);
        e2.push_back(r.l2);
        ei.push_back(r.linf);
    }
    return {fit_order(dx, e2), fit_order(dx, ei)};
}

std::vector<ErrorReport> converge(const RunConfig& cfg, Stepper stepper) {
    cfg.validate();
    if (cfg.n_list.size() < 3)
        throw ConfigError("convergence study needs at least 3 grid levels");
    ProblemSpec problem = problem_from_config(cfg);
    std::vector<ErrorReport> out;
    for (int n : cfg.n_list) out.push_back(run_simulation(problem, n, cfg, stepper));
    return out;
}

double bisect_stability(const ProblemSpec& problem, int n, const RunConfig& cfg) {
    auto probe = [&](double gamma) {
        RunConfig c = cfg;
        c.gamma = gamma;
        c.t_end = -1.0;  // one period
        ErrorReport r = run_simulation(problem, n, c, Stepper::kModified, Detector{true, 10.0});
        return !r.unstable;
    };
    double lo = 1.0, hi = 1.5;
    if (!probe(lo)) return lo;
    if (probe(hi)) return hi;
    for (int it = 0; it < 8; ++it) {
        const double mid = 0.5 * (lo + hi);
        (probe(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<StabilityRow> stability_sweep(const RunConfig& cfg) {
    cfg.validate();
    ProblemSpec problem = problem_from_config(cfg);
    ProblemSpec continuous = problem.continuous_variant();
    std::vector<StabilityRow> rows;
    for (int n : cfg.n_list) {
        StabilityRow row;
        row.n = n;
        row.gamma_t = stability_limit(problem.c, problem.dim);
        row.gamma_c = bisect_stability(continuous, n, cfg);
        row.gamma_cfm = bisect_stability(problem, n, cfg);
        rows.push_back(row);
    }
    return rows;
}

AblationResult ablation(const RunConfig& cfg) {
    AblationResult out;
    out.runs_modified = converge(cfg, Stepper::kModified);
    out.runs_naive = converge(cfg, Stepper::kNaive);
    out.modified = fit_orders(out.runs_modified);
    out.naive = fit_orders(out.runs_naive);
    return out;
}

CalibrationResult calibrate(const RunConfig& cfg) {
    cfg.validate();
    ProblemSpec problem = problem_from_config(cfg);
    const int n = cfg.n_list.front();
    CalibrationResult result;
    const double values[3] = {1e-2, 1.0, 1e2};
    for (double c1 : values) {
        for (double c2 : values) {
            RunConfig c = cfg;
            c.c1 = c1;
            c.c2 = c2;
            ErrorReport r = run_simulation(problem, n, c);
            result.table.push_back({c1, c2, r.l2, r.linf});
        }
    }
    result.best = *std::min_element(result.table.begin(), result.table.end(),
                                    [](const CalibrationEntry& a, const CalibrationEntry& b) {
                                        return a.l2 < b.l2;
                                    });
    return result;
}

void write_errors_csv(const std::string& path, const std::vector<ErrorReport>& rows) {
    std::ofstream out(path);
    if (!out) throw CfmError("cannot open " + path);
    out << "N,dx,dt,L2,Linf\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", r.n, r.dx, r.dt, r.l2,
                      r.linf);
        out << buf;
    }
}

void write_order_json(const std::string& path, const OrderFit& fit) {
    nlohmann::json j;
    j["L2"] = fit.l2;
    j["Linf"] = fit.linf;
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

void write_stability_csv(const std::string& path, const std::vector<StabilityRow>& rows) {
    std::ofstream out(path);
    if (!out) throw CfmError("cannot open " + path);
    out << "N,gamma_t,gamma_c,gamma_cfm\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", r.n, r.gamma_t, r.gamma_c,
                      r.gamma_cfm);
        out << buf;
    }
}

void write_run_json(const std::string& path, const std::string& problem_id, const ErrorReport& r) {
    nlohmann::json j;
    j["problem"] = problem_id;
    j["n"] = r.n;
    j["dx"] = r.dx;
    j["dt"] = r.dt;
    j["levels"] = r.nt_levels;
    j["L2"] = r.l2;
    j["Linf"] = r.linf;
    j["unstable"] = r.unstable;
    if (r.unstable) j["unstable_step"] = r.unstable_step;
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

void write_steps_csv(const std::string& path, const ErrorReport& r) {
    std::ofstream out(path);
    if (!out) throw CfmError("cannot open " + path);
    out << "level,t,L2,Linf\n";
    char buf[160];
    for (std::size_t k = 0; k < r.step_l2.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", k, k * r.dt, r.step_l2[k],
                      r.step_linf[k]);
        out << buf;
    }
}

}  // namespace cfm
