#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cfm/harness.hpp"

namespace fs = std::filesystem;

namespace {

void add_common_options(CLI::App* cmd, cfm::RunConfig& cfg, std::string& n_spec,
                        std::string& config_path) {
    cmd->add_option("--config", config_path, "key=value config file (flags override it)");
    cmd->add_option("--problem", cfg.problem_id,
                    "problem id: line1d, circle, star, osculating, em-shield");
    cmd->add_option("--n", n_spec, "grid sizes per axis, comma separated");
    cmd->add_option("--gamma", cfg.gamma, "time step ratio dt/dx");
    cmd->add_option("--dt-rule", cfg.dt_rule, "gamma=<x> or cfl=<x> (dt = x*dx/c)");
    cmd->add_option("--l-factor", cfg.l_factor, "region size in units of sqrt(dx^2+dy^2)");
    cmd->add_option("--c1", cfg.c1, "Dirichlet penalty coefficient");
    cmd->add_option("--c2", cfg.c2, "Neumann penalty coefficient");
    cmd->add_option("--t-end", cfg.t_end, "end time (default: one period)");
    cmd->add_option("--c", cfg.c_em, "wave speed for em-shield (1 = nondimensional)");
    cmd->add_option("--threads", cfg.threads, "worker threads (0 = all)");
    cmd->add_option("--out", cfg.out_dir, "output directory");
    cmd->add_option("--snapshot-every", cfg.snapshot_every, "write a snapshot every k steps");
    cmd->add_flag("--dump-tiling", cfg.dump_tiling, "write the region tiling as JSON");
    cmd->add_flag("--diagnostics", cfg.diagnostics, "write per-region solve diagnostics");
}

void parse_n_list(const std::string& spec, cfm::RunConfig& cfg) {
    if (spec.empty()) return;
    cfg.n_list.clear();
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) cfg.n_list.push_back(std::stoi(tok));
}

cfm::RunConfig finalize_config(const CLI::App* cmd, cfm::RunConfig cli_cfg,
                               const std::string& n_spec, const std::string& config_path) {
    cfm::RunConfig cfg = cli_cfg;
    if (!config_path.empty()) {
        cfg = cfm::load_config_file(config_path);
        // Explicit command-line flags win over file values.
        auto set = [&](const std::string& name) { return cmd->count(name) > 0; };
        if (set("--problem")) cfg.problem_id = cli_cfg.problem_id;
        if (set("--gamma")) cfg.gamma = cli_cfg.gamma;
        if (set("--dt-rule")) cfg.dt_rule = cli_cfg.dt_rule;
        if (set("--l-factor")) cfg.l_factor = cli_cfg.l_factor;
        if (set("--c1")) cfg.c1 = cli_cfg.c1;
        if (set("--c2")) cfg.c2 = cli_cfg.c2;
        if (set("--t-end")) cfg.t_end = cli_cfg.t_end;
        if (set("--c")) cfg.c_em = cli_cfg.c_em;
        if (set("--threads")) cfg.threads = cli_cfg.threads;
        if (set("--out")) cfg.out_dir = cli_cfg.out_dir;
        if (set("--snapshot-every")) cfg.snapshot_every = cli_cfg.snapshot_every;
        if (set("--dump-tiling")) cfg.dump_tiling = cli_cfg.dump_tiling;
        if (set("--diagnostics")) cfg.diagnostics = cli_cfg.diagnostics;
    }
    parse_n_list(n_spec, cfg);
    cfg.validate();
    fs::create_directories(cfg.out_dir);
    return cfg;
}

int cmd_run(const cfm::RunConfig& cfg) {
    cfm::ProblemSpec problem = cfm::problem_from_config(cfg);
    const int n = cfg.n_list.front();
    const std::string base = cfg.out_dir + "/" + cfg.problem_id + "_n" + std::to_string(n);
    cfm::ErrorReport report = cfm::run_simulation(problem, n, cfg, cfm::Stepper::kModified, {},
                                                  base);
    cfm::write_errors_csv(cfg.out_dir + "/errors.csv", {report});
    cfm::write_run_json(base + "_report.json", cfg.problem_id, report);
    cfm::write_steps_csv(base + "_steps.csv", report);
    std::printf("%s n=%d dx=%.6g dt=%.6g levels=%d L2=%.6e Linf=%.6e\n", cfg.problem_id.c_str(),
                n, report.dx, report.dt, report.nt_levels, report.l2, report.linf);
    return 0;
}

int cmd_converge(const cfm::RunConfig& cfg) {
    std::vector<cfm::ErrorReport> reports = cfm::converge(cfg);
    cfm::OrderFit fit = cfm::fit_orders(reports);
    cfm::write_errors_csv(cfg.out_dir + "/errors.csv", reports);
    cfm::write_order_json(cfg.out_dir + "/order.json", fit);
    for (const auto& r : reports)
        std::printf("N=%4d  dx=%.6g  L2=%.6e  Linf=%.6e\n", r.n, r.dx, r.l2, r.linf);
    std::printf("order: L2=%.3f Linf=%.3f\n", fit.l2, fit.linf);
    return 0;
}

int cmd_stability(const cfm::RunConfig& cfg) {
    std::vector<cfm::StabilityRow> rows = cfm::stability_sweep(cfg);
    cfm::write_stability_csv(cfg.out_dir + "/stability.csv", rows);
    for (const auto& r : rows)
        std::printf("N=%4d  gamma_t=%.4f  gamma_c=%.4f  gamma_cfm=%.4f\n", r.n, r.gamma_t,
                    r.gamma_c, r.gamma_cfm);
    return 0;
}

int cmd_ablation(const cfm::RunConfig& cfg) {
    cfm::AblationResult res = cfm::ablation(cfg);
    cfm::write_errors_csv(cfg.out_dir + "/errors_modified.csv", res.runs_modified);
    cfm::write_errors_csv(cfg.out_dir + "/errors_naive.csv", res.runs_naive);
    nlohmann::json j;
    j["modified"] = {{"L2", res.modified.l2}, {"Linf", res.modified.linf}};
    j["naive"] = {{"L2", res.naive.l2}, {"Linf", res.naive.linf}};
    std::ofstream out(cfg.out_dir + "/ablation.json");
    out << j.dump(2) << "\n";
    std::printf("modified order: L2=%.3f Linf=%.3f\n", res.modified.l2, res.modified.linf);
    std::printf("naive    order: L2=%.3f Linf=%.3f\n", res.naive.l2, res.naive.linf);
    return 0;
}

int cmd_calibrate(const cfm::RunConfig& cfg) {
    cfm::CalibrationResult res = cfm::calibrate(cfg);
    std::ofstream out(cfg.out_dir + "/calibration.csv");
    out << "c1,c2,L2,Linf\n";
    char buf[160];
    for (const auto& e : res.table) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", e.c1, e.c2, e.l2, e.linf);
        out << buf;
    }
    std::printf("best: c1=%g c2=%g (L2=%.6e)\n", res.best.c1, res.best.c2, res.best.l2);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correction-function solver for the wave equation with interface jumps"};
    app.require_subcommand(1);

    cfm::RunConfig cfg;
    std::string n_spec, config_path;

    CLI::App* run = app.add_subcommand("run", "simulate one grid and report error norms");
    CLI::App* conv = app.add_subcommand("converge", "grid refinement study with order fit");
    CLI::App* stab = app.add_subcommand("stability", "bisect the empirical dt/dx limit");
    CLI::App* abl = app.add_subcommand("ablation", "modified vs naive stage corrections");
    CLI::App* cal = app.add_subcommand("calibrate", "coarse sweep of penalty coefficients");
    for (CLI::App* cmd : {run, conv, stab, abl, cal})
        add_common_options(cmd, cfg, n_spec, config_path);

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* active = app.get_subcommands().front();
        cfm::RunConfig final_cfg = finalize_config(active, cfg, n_spec, config_path);
        if (active == run) return cmd_run(final_cfg);
        if (active == conv) return cmd_converge(final_cfg);
        if (active == stab) return cmd_stability(final_cfg);
        if (active == abl) return cmd_ablation(final_cfg);
        return cmd_calibrate(final_cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
