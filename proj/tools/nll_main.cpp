#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nll/runner.hpp"
#include "nll/version.hpp"

namespace {

struct Flags {
    std::string config_path;
    std::string out_dir;
    std::optional<int> n;
    std::optional<double> s;
    std::optional<double> q;
    std::optional<double> tol;
    std::optional<double> r_in;
    std::optional<double> R_out;
    std::optional<int> depth;
    std::optional<int> angular;
    std::optional<int> jobs;
    std::optional<long> seed;
    std::optional<double> safety;
    std::optional<double> base_radius;
    std::optional<int> doublings;
    std::optional<int> kmax;
    std::optional<double> c0;
    std::optional<double> cbar;
    std::optional<int> max_steps;
    std::vector<double> scales;
    std::vector<double> sharpness_radii;
    std::string kernel_kind;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config_path, "JSON config file");
    cmd->add_option("--out", f.out_dir, "output directory");
    cmd->add_option("--n", f.n, "space dimension");
    cmd->add_option("--s", f.s, "operator order in (0,1)");
    cmd->add_option("--q", f.q, "nonlinearity exponent");
    cmd->add_option("--tol", f.tol, "quadrature relative tolerance");
    cmd->add_option("--r-in", f.r_in, "singularity split radius");
    cmd->add_option("--R-out", f.R_out, "truncation radius");
    cmd->add_option("--depth", f.depth, "max refinement depth");
    cmd->add_option("--angular", f.angular, "angular resolution");
    cmd->add_option("--jobs", f.jobs, "worker threads (0 = auto)");
    cmd->add_option("--seed", f.seed, "seed echoed into reports");
    cmd->add_option("--kernel", f.kernel_kind,
                    "kernel kind: fractional | anisotropic | custom-table");
}

// Flag-wins merge on top of the (optional) config file.
nll::RunConfig assemble(const Flags& f, const std::string& scenario) {
    nll::RunConfig cfg;
    if (!f.config_path.empty()) cfg = nll::load_config(f.config_path);
    cfg.scenario = scenario;
    if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
    if (f.n) cfg.problem.n = *f.n;
    if (f.s) cfg.problem.s = *f.s;
    if (f.q) cfg.problem.q = *f.q;
    if (f.tol) cfg.quadrature.tol = *f.tol;
    if (f.r_in) cfg.quadrature.r_in = *f.r_in;
    if (f.R_out) cfg.quadrature.R_out = *f.R_out;
    if (f.depth) cfg.quadrature.depth = *f.depth;
    if (f.angular) cfg.quadrature.angular = *f.angular;
    if (f.jobs) cfg.jobs = *f.jobs;
    if (f.seed) cfg.seed = *f.seed;
    if (f.safety) cfg.sharpness.safety = *f.safety;
    if (f.base_radius) cfg.mass_scan.base_radius = *f.base_radius;
    if (f.doublings) cfg.mass_scan.doublings = *f.doublings;
    if (f.kmax) cfg.mass_scan.k_max = *f.kmax;
    if (f.c0) cfg.iterate.c0 = *f.c0;
    if (f.cbar) cfg.iterate.cbar = *f.cbar;
    if (f.max_steps) cfg.iterate.max_steps = *f.max_steps;
    if (!f.scales.empty()) cfg.cutoff_scales = f.scales;
    if (!f.sharpness_radii.empty()) cfg.sharpness.radii = f.sharpness_radii;
    if (!f.kernel_kind.empty()) cfg.kernel.kind = f.kernel_kind;
    cfg.validate();
    return cfg;
}

int execute(const Flags& f, const std::string& scenario) {
    try {
        const nll::RunConfig cfg = assemble(f, scenario);
        const nll::RunReport report = nll::run(cfg);
        for (const nll::CheckResult& c : report.checks)
            std::printf("[%s] %s  %s\n", c.status.c_str(), c.name.c_str(),
                        c.details.c_str());
        std::printf("report: %s/report.json\n", cfg.out_dir.c_str());
        return nll::run_passed(report) ? 0 : 1;
    } catch (const nll::config_error& e) {
        std::fprintf(stderr, "config error at %s: %s\n", e.field_path.c_str(), e.what());
        return 2;
    } catch (const nll::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nll: numerical checks for nonlocal elliptic inequalities"};
    app.set_version_flag("--version", nll::kVersion);
    app.require_subcommand(1);

    Flags f;
    std::string chosen;
    for (const std::string name :
         {"operator-eval", "cutoff-verify", "pairing-check", "mass-scan", "classify",
          "iterate", "critical-split", "sharpness", "full-suite"}) {
        CLI::App* cmd = app.add_subcommand(name, "run the " + name + " scenario");
        add_common(cmd, f);
        if (name == "sharpness") {
            cmd->add_option("--safety", f.safety, "calibration safety factor in (0,1)");
            cmd->add_option("--radii", f.sharpness_radii,
                            "sample radii (overrides the log-spaced defaults)");
        }
        if (name == "mass-scan") {
            cmd->add_option("--base-radius", f.base_radius, "smallest radius");
            cmd->add_option("--doublings", f.doublings, "number of radius doublings");
            cmd->add_option("--kmax", f.kmax, "dyadic series truncation");
        }
        if (name == "iterate") {
            cmd->add_option("--c0", f.c0, "initial constant C_0");
            cmd->add_option("--cbar", f.cbar, "recursion constant");
            cmd->add_option("--max-steps", f.max_steps, "iteration length");
        }
        if (name == "cutoff-verify")
            cmd->add_option("--scales", f.scales, "cutoff scales R");
        cmd->callback([&chosen, name]() { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);
    return execute(f, chosen);
}
